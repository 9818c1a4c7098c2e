"""Antenna configurations, transmitter side-information octuples, and
per-slot Rayleigh channel realizations of the 2-user MIMO interference
channel.

The system is Y1(t) = H11(t) X1(t) + H12(t) X2(t) and
Y2(t) = H21(t) X1(t) + H22(t) X2(t), with H_ij of shape N_i x M_j and
entries i.i.d. CN(0, 1) across antennas and time. What each transmitter
knows about each of the four matrices (nothing, one slot late, or
instantly) is an 8-slot map; the named constructors below build the
handful of octuples whose DoF regions are fully characterized.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from micdof import numerics


class ZeroAntennas(ValueError):
    """An antenna count of zero was supplied."""


class UnknownName(ValueError):
    """No side-information model is registered under the given name."""


@dataclass(frozen=True)
class AntennaConfig:
    """Antenna counts (m1, m2, n1, n2) with n1 >= n2.

    ``swapped`` records whether :func:`canonicalize` relabeled the users
    to establish n1 >= n2, so downstream results can be reported in the
    caller's original labeling.
    """

    m1: int
    m2: int
    n1: int
    n2: int
    swapped: bool = False

    def __post_init__(self) -> None:
        for name in ("m1", "m2", "n1", "n2"):
            count = getattr(self, name)
            if count < 1:
                raise ZeroAntennas(f"{name} must be >= 1, got {count}")
        if self.n1 < self.n2:
            raise ValueError("not canonical: n1 < n2 (use canonicalize)")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.m1, self.m2, self.n1, self.n2)

    def __str__(self) -> str:
        base = f"({self.m1},{self.m2},{self.n1},{self.n2})"
        return base + (" [users relabeled]" if self.swapped else "")


def canonicalize(m1: int, m2: int, n1: int, n2: int) -> AntennaConfig:
    """Build an AntennaConfig, relabeling users if needed so n1 >= n2."""
    for name, count in (("m1", m1), ("m2", m2), ("n1", n1), ("n2", n2)):
        if count < 1:
            raise ZeroAntennas(f"{name} must be >= 1, got {count}")
    if n1 < n2:
        return AntennaConfig(m2, m1, n2, n1, swapped=True)
    return AntennaConfig(m1, m2, n1, n2, swapped=False)


class CsitState(enum.Enum):
    """What a transmitter knows about one channel matrix."""

    UNKNOWN = "unknown"
    DELAYED = "delayed"
    INSTANT = "instant"


TRANSMITTERS = ("t1", "t2")
LINKS = ("h11", "h12", "h21", "h22")
_SLOTS: tuple[tuple[str, str], ...] = tuple(itertools.product(TRANSMITTERS, LINKS))


@dataclass(frozen=True)
class CsitModel:
    """Side-information octuple: a CsitState per (transmitter, channel).

    States are stored in the fixed slot order (t1, h11), (t1, h12), ...,
    (t2, h22) so octuples are hashable and cheap to enumerate.
    """

    states: tuple[CsitState, ...]

    def __post_init__(self) -> None:
        if len(self.states) != 8:
            raise ValueError(f"expected 8 states, got {len(self.states)}")

    @classmethod
    def from_map(cls, knowledge: Mapping[tuple[str, str], CsitState]) -> "CsitModel":
        """Build from a {(tx, link): state} map; unlisted slots are UNKNOWN."""
        for key in knowledge:
            if key not in _SLOTS:
                raise ValueError(f"unknown slot {key!r}")
        return cls(tuple(knowledge.get(slot, CsitState.UNKNOWN) for slot in _SLOTS))

    def state(self, tx: str, link: str) -> CsitState:
        return self.states[_SLOTS.index((tx, link))]

    def items(self) -> Iterator[tuple[tuple[str, str], CsitState]]:
        return iter(zip(_SLOTS, self.states))


_I = CsitState.INSTANT
_D = CsitState.DELAYED

MODEL_NAMES = (
    "hybrid1",
    "hybrid2",
    "weaker-hybrid1",
    "weaker-hybrid2",
    "enhanced-hybrid1",
    "enhanced-hybrid2",
    "delayed",
    "instantaneous",
)


def named_model(name: str) -> CsitModel:
    """The side-information octuple for one of the characterized models.

    hybrid1: T1 knows the channels into R2 (h21, h22) instantly; T2 knows
    the channels into R1 (h11, h12) one slot late. hybrid2 mirrors it.
    The weaker variants drop the direct-channel knowledge (h22 or h11);
    the enhanced variants keep a single delayed slot and make everything
    else instantaneous. delayed/instantaneous give both transmitters the
    same kind of knowledge of their unpaired receiver's channels.
    """
    if name == "hybrid1":
        return CsitModel.from_map(
            {("t1", "h21"): _I, ("t1", "h22"): _I, ("t2", "h11"): _D, ("t2", "h12"): _D}
        )
    if name == "hybrid2":
        return CsitModel.from_map(
            {("t2", "h11"): _I, ("t2", "h12"): _I, ("t1", "h21"): _D, ("t1", "h22"): _D}
        )
    if name == "weaker-hybrid1":
        return CsitModel.from_map(
            {("t1", "h21"): _I, ("t2", "h11"): _D, ("t2", "h12"): _D}
        )
    if name == "weaker-hybrid2":
        return CsitModel.from_map(
            {("t2", "h12"): _I, ("t1", "h21"): _D, ("t1", "h22"): _D}
        )
    if name == "enhanced-hybrid1":
        states = {slot: _I for slot in _SLOTS}
        states[("t2", "h12")] = _D
        return CsitModel.from_map(states)
    if name == "enhanced-hybrid2":
        states = {slot: _I for slot in _SLOTS}
        states[("t1", "h21")] = _D
        return CsitModel.from_map(states)
    if name == "delayed":
        return CsitModel.from_map(
            {("t1", "h21"): _D, ("t1", "h22"): _D, ("t2", "h11"): _D, ("t2", "h12"): _D}
        )
    if name == "instantaneous":
        return CsitModel.from_map(
            {("t1", "h21"): _I, ("t1", "h22"): _I, ("t2", "h11"): _I, ("t2", "h12"): _I}
        )
    raise UnknownName(f"no model named {name!r} (choose from {', '.join(MODEL_NAMES)})")


def enumerate_octuples() -> Iterator[CsitModel]:
    """All 3^8 = 6561 side-information octuples, in a fixed order."""
    for states in itertools.product(tuple(CsitState), repeat=8):
        yield CsitModel(states)


def canonical_sweep(max_antennas: int) -> Iterator[AntennaConfig]:
    """All canonical configs with every antenna count in 1..max_antennas.

    Canonical means n1 >= n2; the m counts range freely, so the sweep
    covers each physical channel exactly once up to user relabeling.
    """
    rng = range(1, max_antennas + 1)
    for m1, m2, n1 in itertools.product(rng, rng, rng):
        for n2 in range(1, n1 + 1):
            yield AntennaConfig(m1, m2, n1, n2)


@dataclass(frozen=True)
class SlotChannels:
    """The four channel matrices of one time slot."""

    h11: np.ndarray
    h12: np.ndarray
    h21: np.ndarray
    h22: np.ndarray


@dataclass(frozen=True)
class ChannelRealization:
    """Per-slot channel matrices for a whole transmission block."""

    cfg: AntennaConfig
    slots: tuple[SlotChannels, ...]

    def __len__(self) -> int:
        return len(self.slots)


def sample_realization(
    cfg: AntennaConfig, slots: int, rng: np.random.Generator
) -> ChannelRealization:
    """Draw ``slots`` independent Rayleigh realizations of all four links."""
    if slots < 1:
        raise ValueError(f"slots must be >= 1, got {slots}")
    drawn = []
    for _ in range(slots):
        drawn.append(
            SlotChannels(
                h11=numerics.sample_gaussian(cfg.n1, cfg.m1, rng),
                h12=numerics.sample_gaussian(cfg.n1, cfg.m2, rng),
                h21=numerics.sample_gaussian(cfg.n2, cfg.m1, rng),
                h22=numerics.sample_gaussian(cfg.n2, cfg.m2, rng),
            )
        )
    return ChannelRealization(cfg=cfg, slots=tuple(drawn))
