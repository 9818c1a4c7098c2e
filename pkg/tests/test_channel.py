"""Antenna configurations, side-information octuples, channel sampling."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from micdof import channel
from micdof.channel import (
    AntennaConfig,
    CsitModel,
    CsitState,
    UnknownName,
    ZeroAntennas,
    canonicalize,
    named_model,
)

counts = st.integers(min_value=1, max_value=9)


class TestAntennaConfig:
    def test_canonical_passthrough(self):
        cfg = AntennaConfig(4, 5, 3, 2)
        assert cfg.as_tuple() == (4, 5, 3, 2)
        assert not cfg.swapped

    def test_rejects_non_canonical_direct_construction(self):
        with pytest.raises(ValueError, match="canonical"):
            AntennaConfig(5, 4, 2, 3)

    @pytest.mark.parametrize("bad", [(0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0)])
    def test_rejects_zero_antennas(self, bad):
        with pytest.raises(ZeroAntennas):
            AntennaConfig(*bad)

    def test_canonicalize_swaps_users(self):
        cfg = canonicalize(5, 4, 2, 3)
        assert cfg.as_tuple() == (4, 5, 3, 2)
        assert cfg.swapped

    def test_canonicalize_keeps_canonical(self):
        cfg = canonicalize(4, 5, 3, 2)
        assert cfg.as_tuple() == (4, 5, 3, 2)
        assert not cfg.swapped

    @given(m1=counts, m2=counts, n1=counts, n2=counts)
    @settings(max_examples=100, deadline=None)
    def test_canonicalize_always_yields_n1_ge_n2(self, m1, m2, n1, n2):
        cfg = canonicalize(m1, m2, n1, n2)
        assert cfg.n1 >= cfg.n2
        # Relabeling both users at once preserves the physical channel.
        assert sorted((cfg.m1, cfg.m2)) == sorted((m1, m2))
        assert sorted((cfg.n1, cfg.n2)) == sorted((n1, n2))

    def test_str_marks_relabeling(self):
        assert str(canonicalize(4, 5, 3, 2)) == "(4,5,3,2)"
        assert "[users relabeled]" in str(canonicalize(5, 4, 2, 3))


class TestCsitModel:
    def test_from_map_defaults_to_unknown(self):
        m = CsitModel.from_map({})
        assert all(s is CsitState.UNKNOWN for s in m.states)

    def test_from_map_rejects_bad_slot(self):
        with pytest.raises(ValueError):
            CsitModel.from_map({("t3", "h11"): CsitState.DELAYED})

    def test_state_lookup(self):
        m = named_model("hybrid1")
        assert m.state("t1", "h21") is CsitState.INSTANT
        assert m.state("t1", "h22") is CsitState.INSTANT
        assert m.state("t2", "h11") is CsitState.DELAYED
        assert m.state("t2", "h12") is CsitState.DELAYED
        assert m.state("t1", "h11") is CsitState.UNKNOWN

    def test_items_covers_all_slots(self):
        m = named_model("delayed")
        slots = [slot for slot, _ in m.items()]
        assert slots == list(itertools.product(("t1", "t2"), ("h11", "h12", "h21", "h22")))


class TestNamedModels:
    def test_all_names_resolve(self):
        for name in channel.MODEL_NAMES:
            assert isinstance(named_model(name), CsitModel)

    def test_unknown_name_raises(self):
        with pytest.raises(UnknownName):
            named_model("hybrid3")

    def test_hybrid_models_mirror_each_other(self):
        h1, h2 = named_model("hybrid1"), named_model("hybrid2")
        # Swapping users maps t1<->t2 and h11<->h22, h12<->h21.
        mirror = {"h11": "h22", "h22": "h11", "h12": "h21", "h21": "h12"}
        other_tx = {"t1": "t2", "t2": "t1"}
        for (tx, link), state in h1.items():
            assert h2.state(other_tx[tx], mirror[link]) is state

    def test_delayed_model_grants_cross_receiver_links(self):
        """Each transmitter learns the unpaired receiver's channels late."""
        m = named_model("delayed")
        for slot in (("t1", "h21"), ("t1", "h22"), ("t2", "h11"), ("t2", "h12")):
            assert m.state(*slot) is CsitState.DELAYED
        for slot in (("t1", "h11"), ("t1", "h12"), ("t2", "h21"), ("t2", "h22")):
            assert m.state(*slot) is CsitState.UNKNOWN

    def test_instantaneous_model_grants_cross_receiver_links(self):
        m = named_model("instantaneous")
        for slot in (("t1", "h21"), ("t1", "h22"), ("t2", "h11"), ("t2", "h12")):
            assert m.state(*slot) is CsitState.INSTANT
        for slot in (("t1", "h11"), ("t1", "h12"), ("t2", "h21"), ("t2", "h22")):
            assert m.state(*slot) is CsitState.UNKNOWN

    def test_weaker_hybrid1_drops_direct_link_knowledge(self):
        m = named_model("weaker-hybrid1")
        assert m.state("t1", "h21") is CsitState.INSTANT
        assert m.state("t1", "h22") is CsitState.UNKNOWN
        assert m.state("t2", "h11") is CsitState.DELAYED
        assert m.state("t2", "h12") is CsitState.DELAYED

    def test_enhanced_hybrid1_all_instant_but_one(self):
        m = named_model("enhanced-hybrid1")
        assert m.state("t2", "h12") is CsitState.DELAYED
        others = [s for slot, s in m.items() if slot != ("t2", "h12")]
        assert all(s is CsitState.INSTANT for s in others)


def test_enumerate_octuples_count_and_uniqueness():
    octs = list(channel.enumerate_octuples())
    assert len(octs) == 3**8 == 6561
    assert len({o.states for o in octs}) == 6561


def test_canonical_sweep_counts():
    sweep2 = list(channel.canonical_sweep(2))
    # n1 >= n2 halves the receiver grid: 2*2 transmitter pairs x 3 receiver pairs.
    assert len(sweep2) == 12
    assert all(c.n1 >= c.n2 for c in sweep2)
    assert len(set(sweep2)) == len(sweep2)
    sweep3 = list(channel.canonical_sweep(3))
    assert len(sweep3) == 9 * 6


class TestSampling:
    def test_realization_shapes(self):
        cfg = AntennaConfig(4, 5, 3, 2)
        real = channel.sample_realization(cfg, 5, np.random.default_rng(0))
        assert len(real) == 5
        for slot in real.slots:
            assert slot.h11.shape == (3, 4)
            assert slot.h12.shape == (3, 5)
            assert slot.h21.shape == (2, 4)
            assert slot.h22.shape == (2, 5)

    def test_realization_deterministic_per_seed(self):
        cfg = AntennaConfig(2, 2, 2, 1)
        a = channel.sample_realization(cfg, 3, np.random.default_rng(7))
        b = channel.sample_realization(cfg, 3, np.random.default_rng(7))
        for sa, sb in zip(a.slots, b.slots):
            np.testing.assert_array_equal(sa.h11, sb.h11)
            np.testing.assert_array_equal(sa.h22, sb.h22)

    def test_slots_are_independent_draws(self):
        cfg = AntennaConfig(2, 2, 2, 1)
        real = channel.sample_realization(cfg, 2, np.random.default_rng(7))
        assert not np.array_equal(real.slots[0].h11, real.slots[1].h11)

    def test_rejects_nonpositive_slot_count(self):
        cfg = AntennaConfig(1, 1, 1, 1)
        with pytest.raises(ValueError):
            channel.sample_realization(cfg, 0, np.random.default_rng(0))
