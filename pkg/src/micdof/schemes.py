"""Two-phase interference-alignment scheme and the 16-slot alternating plan.

The scheme applies when both transmitters have more antennas than both
receivers. One transmitter ("the nulling side") knows its cross channel
instantly and beams into its null space; the other ("the flooding
side") sends at full width and later uses delayed knowledge to replay
the interference it caused. Roles are fixed by the model: under hybrid1
the nulling side is user 1, under hybrid2 user 2. Internally everything
runs in machinery coordinates where user 1 is always the nulling side;
hybrid2 just relabels users and channels on the way in and out.

Phase 1 (t1 slots): the flooding transmitter sends fresh data symbols,
one antenna each, while the nulling transmitter sends x fresh symbols
per slot inside the cross-channel null space. The interfered receiver
rotates each slot's observation so its desired streams occupy the first
coordinates; the remaining coordinates are pure interference, split
into rows the receiver must still learn (those entangled with data)
and rows it already holds (pure interference it simply observed).

Phase 2 (t2 slots): the nulling transmitter sends its remaining
symbols, spilling at most delta(t) streams outside the null space; the
flooding transmitter replays ledger rows, recomputed from delayed
knowledge of the earlier slots. The interfered receiver cancels the
rows it holds, jointly decodes the unknown rows with the fresh
symbols, then strips phase-1 interference; the clean receiver
zero-forces the spill and decodes every replayed value, each one more
linear equation in its own data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from micdof import numerics, regions
from micdof.channel import AntennaConfig, ChannelRealization, UnknownName

HIA_MODELS = ("hybrid1", "hybrid2")


class NotApplicable(Exception):
    """The config is outside the both-transmitters-larger case."""


class NoSecondCorner(Exception):
    """Only the two-corner sub-case has a secondary corner point."""


class ScheduleInfeasible(Exception):
    """The ledger cannot be packed into phase 2; parameters are inconsistent."""


def _machinery(cfg: AntennaConfig, model: str) -> tuple[int, int, int, int, int]:
    """Counts (m1, m2_phys, n1, n2, m2_eff) with user 1 as the nulling side.

    For hybrid2 the users are relabeled (m and n pairs both swapped).
    The flooding side keeps at most n1 + n2 effective antennas: more
    cannot raise the DoF, and trimming guarantees the interfered
    receiver can observe the whole per-slot interference.
    """
    if model == "hybrid1":
        m1, m2, n1, n2 = cfg.m1, cfg.m2, cfg.n1, cfg.n2
    elif model == "hybrid2":
        m1, m2, n1, n2 = cfg.m2, cfg.m1, cfg.n2, cfg.n1
    else:
        raise UnknownName(f"no alignment scheme for model {model!r}")
    return m1, m2, n1, n2, min(m2, n1 + n2)


def hia_case(cfg: AntennaConfig, model: str) -> str:
    """Scheme sub-case ("I", "II", or "III") for an applicable config.

    Applicable means both transmitters strictly out-antenna both
    receivers; anything else raises NotApplicable (those configs are
    served by previously known schemes and need no symbol-level run).
    The split is evaluated on effective antenna counts.
    """
    if model not in HIA_MODELS:
        raise UnknownName(f"no alignment scheme for model {model!r}")
    case = regions.classify(cfg)
    if case.label is not regions.CaseLabel.A_I_3B:
        raise NotApplicable(
            f"config {cfg} is case {case.label.value}; the alignment scheme "
            "needs both transmitters larger than both receivers"
        )
    sub = case.hybrid1_subcase if model == "hybrid1" else case.hybrid2_subcase
    assert sub is not None
    return sub


@dataclass(frozen=True)
class SchemeParameters:
    """Block design of one scheme run.

    d1_star/d2_star count data symbols per user in the caller's
    labeling; t1/t2/x/delta describe the machinery schedule (x is the
    per-slot null-space stream count of the nulling transmitter, delta
    the declared out-of-null spill per phase-2 slot).
    """

    d1_star: int
    d2_star: int
    t_total: int
    t1: int
    t2: int
    x: int
    delta: tuple[int, ...]
    case: str
    corner: str
    model: str

    def dof(self) -> tuple[Fraction, Fraction]:
        """Achieved DoF pair (d1_star/T, d2_star/T), exact."""
        return (
            Fraction(self.d1_star, self.t_total),
            Fraction(self.d2_star, self.t_total),
        )

    def machinery_split(self) -> tuple[int, int]:
        """(nulling-side symbol count, flooding-side symbol count)."""
        if self.model == "hybrid1":
            return (self.d1_star, self.d2_star)
        return (self.d2_star, self.d1_star)


def _even_spread(total: int, buckets: int) -> list[int]:
    base, rem = divmod(total, buckets)
    return [base + 1 if j < rem else base for j in range(buckets)]


def _spread_with_caps(total: int, caps: Sequence[int]) -> list[int]:
    """As-even-as-possible split of ``total`` under per-bucket caps."""
    if total > sum(caps):
        raise ScheduleInfeasible(f"cannot place {total} items under caps {list(caps)}")
    counts = _even_spread(total, len(caps))
    carry = 0
    for j, cap in enumerate(caps):
        if counts[j] > cap:
            carry += counts[j] - cap
            counts[j] = cap
    for j, cap in enumerate(caps):
        if carry == 0:
            break
        take = min(carry, cap - counts[j])
        counts[j] += take
        carry -= take
    if carry:
        raise ScheduleInfeasible(f"{carry} items left over under caps {list(caps)}")
    return counts


def hia_parameters(
    cfg: AntennaConfig, model: str, corner: str = "primary"
) -> SchemeParameters:
    """Block-design parameters achieving one corner of the DoF region.

    Sub-cases I and II have a single non-trivial corner; sub-case III
    has two, selected by ``corner``. The primary corner is the one
    where phase 1 shortens until the nulling side's budget binds; the
    secondary one keeps the longer phase 1 and caps the nulling side at
    its per-slot width. Requesting the secondary corner outside
    sub-case III raises NoSecondCorner.
    """
    if corner not in ("primary", "secondary"):
        raise ValueError(f"corner must be primary or secondary, got {corner!r}")
    case = hia_case(cfg, model)
    m1, _, n1, n2, m2e = _machinery(cfg, model)
    if corner == "secondary" and case != "III":
        raise NoSecondCorner(
            f"sub-case {case} has a single non-trivial corner; only sub-case "
            "III has a secondary one"
        )
    if case == "III" and corner == "primary":
        md1 = n1 * (m2e - m1)
        md2 = m2e * (m1 - n1)
        t1, t2 = m1 - n1, m2e - m1
        x = m1 - n2
    else:
        # Sub-cases I and II, and the secondary corner of III, share the
        # same frame: the flooding side sends for n2 slots, one data
        # symbol per effective antenna per slot.
        md1 = (m1 - n2) * m2e if case == "III" else n1 * (m2e - n2)
        md2 = m2e * n2
        t1, t2 = n2, m2e - n2
        x = (m2e - n2) if case == "I" else (m1 - n2)
    total_spill = n2 * t2 - (m2e - n2) * t1
    assert total_spill >= 0, "parameter table violates the clean receiver budget"
    delta = tuple(_even_spread(total_spill, t2))
    d1_star, d2_star = (md1, md2) if model == "hybrid1" else (md2, md1)
    return SchemeParameters(
        d1_star=d1_star,
        d2_star=d2_star,
        t_total=t1 + t2,
        t1=t1,
        t2=t2,
        x=x,
        delta=delta,
        case=case,
        corner=corner,
        model=model,
    )


@dataclass(frozen=True)
class ConstraintCheck:
    """One feasibility inequality lhs <= rhs, with its slack status."""

    lhs: int
    rhs: int

    @property
    def status(self) -> str:
        if self.lhs > self.rhs:
            return "violated"
        return "tight" if self.lhs == self.rhs else "slack"

    @property
    def margin(self) -> int:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class FeasibilityReport:
    """The three scheme-feasibility inequalities, evaluated exactly.

    fresh_symbol_room: the nulling side's leftover symbols fit phase 2
    (null width plus declared spill, slot by slot). interfered_rx_budget:
    the interfered receiver has enough phase-2 equations for fresh
    symbols plus the shared ledger. clean_rx_budget: the clean receiver
    can absorb both ledgers after discarding spill dimensions.
    """

    checks: dict[str, ConstraintCheck]

    @property
    def ok(self) -> bool:
        return all(c.status != "violated" for c in self.checks.values())

    def statuses(self) -> dict[str, str]:
        return {name: c.status for name, c in self.checks.items()}


def check_feasibility(params: SchemeParameters, cfg: AntennaConfig) -> FeasibilityReport:
    """Evaluate the three scheduling inequalities in exact integers."""
    m1, _, n1, n2, m2e = _machinery(cfg, params.model)
    md1, _ = params.machinery_split()
    spill = sum(params.delta)
    return FeasibilityReport(
        checks={
            "fresh_symbol_room": ConstraintCheck(
                lhs=md1 - params.x * params.t1,
                rhs=(m1 - n2) * params.t2 + spill,
            ),
            "interfered_rx_budget": ConstraintCheck(lhs=md1, rhs=n1 * params.t2),
            "clean_rx_budget": ConstraintCheck(
                lhs=(m2e - n2) * params.t1,
                rhs=n2 * params.t2 - spill,
            ),
        }
    )


class LedgerRef(NamedTuple):
    """One interference value: row ``row`` of the interfered receiver's
    rotated observation in phase-1 slot ``slot`` (both 0-based)."""

    kind: str  # "s12" (still unknown there) or "s2" (already observed)
    slot: int
    row: int


@dataclass(frozen=True)
class Phase1Slot:
    t: int
    u_ids: tuple[int, ...]  # nulling-side symbols, sent in the null space
    v_ids: tuple[int, ...]  # flooding-side symbols, one per antenna


@dataclass(frozen=True)
class Phase2Slot:
    t: int
    u_ids: tuple[int, ...]  # fresh nulling-side symbols (k of them)
    delta: int  # declared out-of-null spill streams
    payload: tuple[LedgerRef, ...]  # replayed interference rows


@dataclass(frozen=True)
class SwapSlot:
    """Final slot of the alternating plan, with roles flipped: the
    flooding side beams fresh symbols into the null space of its own
    cross channel and replays deferred ledger rows alongside."""

    t: int
    v_ids: tuple[int, ...]
    retransmit: tuple[LedgerRef, ...]


@dataclass(frozen=True)
class TransmissionPlan:
    """Deterministic per-slot schedule, in machinery coordinates.

    kind is "two-phase" for the standard scheme or "alternating" for
    the fixed 16-slot plan; alternating plans carry the extra swap slot
    and defer two ledger rows per 5-slot block to it.
    """

    kind: str
    model: str
    cfg: AntennaConfig
    machine: tuple[int, int, int, int]  # (m1, m2_eff, n1, n2)
    flood_phys: int  # physical antennas on the flooding side
    d1_star: int
    d2_star: int
    t_total: int
    phase1: tuple[Phase1Slot, ...]
    phase2: tuple[Phase2Slot, ...]
    s12: tuple[LedgerRef, ...]
    s2: tuple[LedgerRef, ...]
    params: SchemeParameters | None = None
    swap: SwapSlot | None = None

    def dof(self) -> tuple[Fraction, Fraction]:
        return (
            Fraction(self.d1_star, self.t_total),
            Fraction(self.d2_star, self.t_total),
        )


def build_plan(
    cfg: AntennaConfig, params: SchemeParameters, model: str
) -> TransmissionPlan:
    """Lay out every slot of the two-phase scheme for these parameters.

    Scheduling is deterministic: counts spread as evenly as the
    per-slot caps allow (earlier slots take remainders), ledger rows
    are assigned in a fixed order, already-observed rows fill whatever
    payload room the unknown rows leave. Failure to place everything
    raises ScheduleInfeasible, which given a passing feasibility report
    indicates an arithmetic bug rather than a bad config.
    """
    if model != params.model:
        raise ValueError(f"plan model {model!r} != parameter model {params.model!r}")
    report = check_feasibility(params, cfg)
    if not report.ok:
        bad = [k for k, c in report.checks.items() if c.status == "violated"]
        raise ScheduleInfeasible(f"feasibility violated: {', '.join(bad)}")
    m1, m2p, n1, n2, m2e = _machinery(cfg, model)
    md1, md2 = params.machinery_split()
    t1, t2, x = params.t1, params.t2, params.x
    if md2 != m2e * t1:
        raise ScheduleInfeasible(
            f"flooding side cannot emit {md2} symbols in {t1} slots of {m2e}"
        )

    # Phase 1: the nulling side sends x streams per slot while it still
    # has fresh symbols (a relabeled run can exhaust them early).
    phase1 = []
    next_u = 0
    for t in range(t1):
        take = min(x, md1 - next_u)
        phase1.append(
            Phase1Slot(
                t=t,
                u_ids=tuple(range(next_u, next_u + take)),
                v_ids=tuple(range(t * m2e, (t + 1) * m2e)),
            )
        )
        next_u += take

    s12: list[LedgerRef] = []
    s2: list[LedgerRef] = []
    for slot in phase1:
        sent = len(slot.u_ids)
        s12.extend(LedgerRef("s12", slot.t, r) for r in range(sent))
        s2.extend(LedgerRef("s2", slot.t, r) for r in range(sent, m2e - n2))
    # Unknown rows are delivered row-first across slots: the first-row
    # interference of every slot unblocks the earliest data rows.
    s12.sort(key=lambda ref: (ref.row, ref.slot))

    fresh_total = md1 - next_u
    delta = list(params.delta)
    k_counts = _spread_with_caps(fresh_total, [m1 - n2 + d for d in delta])
    s12_counts = _spread_with_caps(
        len(s12), [min(n1 - k, n2 - d) for k, d in zip(k_counts, delta)]
    )
    s2_counts = []
    s2_left = len(s2)
    for j in range(t2):
        take = min(n2 - delta[j] - s12_counts[j], s2_left)
        s2_counts.append(take)
        s2_left -= take
    if s2_left:
        raise ScheduleInfeasible(f"{s2_left} observed-ledger rows left over")

    phase2 = []
    u_cursor = next_u
    s12_cursor = 0
    s2_cursor = 0
    for j in range(t2):
        payload = tuple(s2[s2_cursor : s2_cursor + s2_counts[j]]) + tuple(
            s12[s12_cursor : s12_cursor + s12_counts[j]]
        )
        s2_cursor += s2_counts[j]
        s12_cursor += s12_counts[j]
        phase2.append(
            Phase2Slot(
                t=t1 + j,
                u_ids=tuple(range(u_cursor, u_cursor + k_counts[j])),
                delta=delta[j],
                payload=payload,
            )
        )
        u_cursor += k_counts[j]
    assert u_cursor == md1

    return TransmissionPlan(
        kind="two-phase",
        model=model,
        cfg=cfg,
        machine=(m1, m2e, n1, n2),
        flood_phys=m2p,
        d1_star=params.d1_star,
        d2_star=params.d2_star,
        t_total=params.t_total,
        phase1=tuple(phase1),
        phase2=tuple(phase2),
        s12=tuple(s12),
        s2=tuple(s2),
        params=params,
    )


def alternating_plan_4532() -> TransmissionPlan:
    """The fixed 16-slot plan for (4,5,3,2) that switches models mid-run.

    Fifteen slots run as three identical 5-slot blocks with user 1 as
    the nulling side. Each block moves 10 + 10 fresh symbols, one pair
    more than the 5-slot two-phase plan, by over-packing its last slot:
    two fresh streams ride with two unknown ledger rows, so the
    interfered receiver keeps only one clean equation in those rows.
    The sixteenth slot flips roles: the flooding side, now knowing its
    own cross channel instantly, beams two extra data symbols into that
    channel's null space and replays one deferred row per block,
    untangling all three blocks retroactively. Net: 30 and 32 symbols
    over 16 slots.
    """
    cfg = AntennaConfig(4, 5, 3, 2)
    phase1 = []
    phase2 = []
    s12: list[LedgerRef] = []
    s2: list[LedgerRef] = []
    for p in range(3):
        base_t = 5 * p
        u0, v0 = 10 * p, 10 * p
        for s in range(2):
            phase1.append(
                Phase1Slot(
                    t=base_t + s,
                    u_ids=(u0 + 2 * s, u0 + 2 * s + 1),
                    v_ids=tuple(range(v0 + 5 * s, v0 + 5 * s + 5)),
                )
            )
            s12.extend(
                (LedgerRef("s12", base_t + s, 0), LedgerRef("s12", base_t + s, 1))
            )
            s2.append(LedgerRef("s2", base_t + s, 2))
        for s in range(2):
            phase2.append(
                Phase2Slot(
                    t=base_t + 2 + s,
                    u_ids=(u0 + 4 + 2 * s, u0 + 5 + 2 * s),
                    delta=0,
                    payload=(
                        LedgerRef("s2", base_t + s, 2),
                        LedgerRef("s12", base_t + s, 0),
                    ),
                )
            )
        phase2.append(
            Phase2Slot(
                t=base_t + 4,
                u_ids=(u0 + 8, u0 + 9),
                delta=0,
                payload=(
                    LedgerRef("s12", base_t + 0, 1),
                    LedgerRef("s12", base_t + 1, 1),
                ),
            )
        )
    swap = SwapSlot(
        t=15,
        v_ids=(30, 31),
        retransmit=(
            LedgerRef("s12", 0, 1),
            LedgerRef("s12", 5, 1),
            LedgerRef("s12", 10, 1),
        ),
    )
    return TransmissionPlan(
        kind="alternating",
        model="alternating",
        cfg=cfg,
        machine=(4, 5, 3, 2),
        flood_phys=5,
        d1_star=30,
        d2_star=32,
        t_total=16,
        phase1=tuple(phase1),
        phase2=tuple(phase2),
        s12=tuple(s12),
        s2=tuple(s2),
        params=None,
        swap=swap,
    )


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of one symbol-level run.

    rank_ok is False when some decode system hit a (measure-zero) rank
    degeneracy; the recovery arrays are then zero-filled and
    max_rel_error is infinite. min_conditioning is the smallest
    least-to-greatest singular-value ratio over all solved systems.
    """

    recovered_u: np.ndarray
    recovered_v: np.ndarray
    max_rel_error: float
    rank_ok: bool
    min_conditioning: float


class _Solver:
    """Exact solves with a running minimum of conditioning ratios."""

    def __init__(self, tol: numerics.Tolerance):
        self.tol = tol
        self.worst = 1.0

    def __call__(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self.worst = min(self.worst, numerics.conditioning(a))
        return numerics.solve_exact(a, b, self.tol)


def _null_and_spill_columns(
    h21: np.ndarray, k: int, tol: numerics.Tolerance
) -> np.ndarray:
    """Transmit basis for k streams: null-space columns of the cross
    channel first, then orthonormal complement columns for the spill."""
    m1 = h21.shape[1]
    if k == 0:
        return np.zeros((m1, 0), dtype=complex)
    null = numerics.null_space_basis(h21, tol)
    in_null = min(k, null.shape[1])
    cols = [null[:, :in_null]]
    if k > in_null:
        complement = numerics.null_space_basis(null.conj().T, tol)
        cols.append(complement[:, : k - in_null])
    return np.hstack(cols)


def execute_and_decode(
    plan: TransmissionPlan,
    channels: ChannelRealization,
    symbols: tuple[np.ndarray, np.ndarray],
    tol: numerics.Tolerance = numerics.DEFAULT_TOL,
) -> DecodeOutcome:
    """Run the plan over one channel realization, noise free, and decode.

    ``symbols`` is (user-1 data, user-2 data) in the caller's labeling,
    with lengths (d1_star, d2_star). Both receivers know all channels;
    transmitter-side computations only read what their role grants: the
    nulling side its current cross channel, the flooding side strictly
    earlier slots. Degenerate draws surface as rank_ok=False rather
    than exceptions so callers can resample.
    """
    if channels.cfg != plan.cfg:
        raise ValueError(f"realization config {channels.cfg} != plan config {plan.cfg}")
    if len(channels) != plan.t_total:
        raise ValueError(f"need {plan.t_total} slots, got {len(channels)}")
    u_orig = np.asarray(symbols[0], dtype=complex).reshape(-1)
    v_orig = np.asarray(symbols[1], dtype=complex).reshape(-1)
    if u_orig.shape != (plan.d1_star,) or v_orig.shape != (plan.d2_star,):
        raise ValueError(
            f"symbol lengths {u_orig.shape[0]}/{v_orig.shape[0]} do not match "
            f"plan ({plan.d1_star}, {plan.d2_star})"
        )

    mirrored = plan.model == "hybrid2"
    mu, mv = (v_orig, u_orig) if mirrored else (u_orig, v_orig)

    solver = _Solver(tol)
    try:
        mu_hat, mv_hat = _run_machinery(plan, channels, mu, mv, solver)
    except (numerics.RankDeficient, numerics.EmptyNullSpace):
        return DecodeOutcome(
            recovered_u=np.zeros(plan.d1_star, dtype=complex),
            recovered_v=np.zeros(plan.d2_star, dtype=complex),
            max_rel_error=math.inf,
            rank_ok=False,
            min_conditioning=solver.worst,
        )

    rec_u, rec_v = (mv_hat, mu_hat) if mirrored else (mu_hat, mv_hat)
    scale = max(
        float(np.max(np.abs(u_orig), initial=0.0)),
        float(np.max(np.abs(v_orig), initial=0.0)),
        1.0,
    )
    err = max(
        float(np.max(np.abs(rec_u - u_orig), initial=0.0)),
        float(np.max(np.abs(rec_v - v_orig), initial=0.0)),
    )
    return DecodeOutcome(
        recovered_u=rec_u,
        recovered_v=rec_v,
        max_rel_error=err / scale,
        rank_ok=True,
        min_conditioning=solver.worst,
    )


def _machinery_slot(plan: TransmissionPlan, channels: ChannelRealization, t: int):
    """Slot channels in machinery coordinates, flooding side trimmed to
    its effective antennas (the rest transmit nothing)."""
    slot = channels.slots[t]
    if plan.model == "hybrid2":
        h11, h12, h21, h22 = slot.h22, slot.h21, slot.h12, slot.h11
    else:
        h11, h12, h21, h22 = slot.h11, slot.h12, slot.h21, slot.h22
    m2e = plan.machine[1]
    return h11, h12[:, :m2e], h21, h22[:, :m2e]


def _run_machinery(
    plan: TransmissionPlan,
    channels: ChannelRealization,
    mu: np.ndarray,
    mv: np.ndarray,
    solve: _Solver,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate and decode in machinery coordinates.

    Raises RankDeficient or EmptyNullSpace on degenerate draws; the
    caller converts those into a flagged outcome.
    """
    m1, m2e, n1, n2 = plan.machine
    tol = solve.tol
    mu_hat = np.zeros(len(mu), dtype=complex)
    mv_hat = np.zeros(len(mv), dtype=complex)

    # Phase 1: transmit, rotate, and catalog.
    rot: dict[int, np.ndarray] = {}  # rotated interfered-rx observation
    des: dict[int, np.ndarray] = {}  # its desired-signal block, sent x sent
    icoef: dict[int, np.ndarray] = {}  # interference coefficients, n1 x m2e
    direct: dict[int, np.ndarray] = {}  # clean-rx observation
    h22cat: dict[int, np.ndarray] = {}
    v_ids: dict[int, tuple[int, ...]] = {}
    for slot in plan.phase1:
        h11, h12e, h21, h22e = _machinery_slot(plan, channels, slot.t)
        sent = len(slot.u_ids)
        v_slot = mv[list(slot.v_ids)]
        if sent:
            p1 = numerics.null_space_basis(h21, tol)[:, :sent]
            x1 = p1 @ mu[list(slot.u_ids)]
            b = numerics.receive_unitary(h11 @ p1, sent, tol)
            des[slot.t] = (b @ (h11 @ p1))[:sent, :]
        else:
            x1 = np.zeros(m1, dtype=complex)
            b = np.eye(n1, dtype=complex)
        rot[slot.t] = b @ (h11 @ x1 + h12e @ v_slot)
        icoef[slot.t] = b @ h12e
        direct[slot.t] = h21 @ x1 + h22e @ v_slot
        h22cat[slot.t] = h22e
        v_ids[slot.t] = slot.v_ids

    def replay(ref: LedgerRef) -> complex:
        # What the flooding transmitter resends: the exact interference
        # row it caused, rebuilt from delayed knowledge of that slot.
        return complex(icoef[ref.slot][ref.row] @ mv[list(v_ids[ref.slot])])

    # Phase 2: replay ledgers, decode fresh symbols and unknown rows.
    s12_vals: dict[LedgerRef, complex] = {}  # decoded at the interfered rx
    clean_vals: dict[LedgerRef, complex] = {}  # decoded at the clean rx
    deferred = []  # over-packed slots, resolved after the swap slot
    null_dim = m1 - n2
    for slot in plan.phase2:
        h11, h12e, h21, h22e = _machinery_slot(plan, channels, slot.t)
        k = len(slot.u_ids)
        pc = len(slot.payload)
        p2 = _null_and_spill_columns(h21, k, tol)
        x1 = p2 @ mu[list(slot.u_ids)] if k else np.zeros(m1, dtype=complex)
        x2 = np.zeros(m2e, dtype=complex)
        x2[:pc] = [replay(ref) for ref in slot.payload]
        y1 = h11 @ x1 + h12e @ x2
        y2 = h21 @ x1 + h22e @ x2

        # Clean receiver: zero-force the spill, then decode every
        # replayed value (each is a fresh equation in its own data).
        spill = max(0, k - null_dim)
        if spill:
            q = numerics.receive_unitary(h21 @ p2[:, k - spill :], spill, tol)[spill:]
        else:
            q = np.eye(n2, dtype=complex)
        if pc:
            decoded = solve(q @ h22e[:, :pc], q @ y2)
            for ref, val in zip(slot.payload, decoded):
                clean_vals[ref] = complex(val)

        # Interfered receiver: cancel rows it observed in phase 1, then
        # solve fresh symbols and unknown rows jointly.
        unknown = [i for i, ref in enumerate(slot.payload) if ref.kind == "s12"]
        y1c = y1.copy()
        for i, ref in enumerate(slot.payload):
            if ref.kind == "s2":
                y1c -= h12e[:, i] * rot[ref.slot][ref.row]
        if k + len(unknown) > n1:
            # Over-packed slot: rotate the fresh streams away and keep
            # the leftover equations in the unknown rows for later.
            b = numerics.receive_unitary(h11 @ p2, k, tol)
            deferred.append(
                (
                    slot,
                    y1c,
                    h11 @ p2,
                    h12e[:, unknown],
                    (b @ y1c)[k:],
                    (b @ h12e[:, unknown])[k:],
                )
            )
            continue
        if k + len(unknown):
            sol = solve(np.hstack([h11 @ p2, h12e[:, unknown]]), y1c)
            mu_hat[list(slot.u_ids)] = sol[:k]
            for i, val in zip(unknown, sol[k:]):
                s12_vals[slot.payload[i]] = complex(val)

    # Swap slot (alternating plan only): roles flip for one slot. The
    # extra data rides the null space of the channel into the interfered
    # receiver, which therefore observes the replayed rows clean.
    if plan.swap is not None:
        swap = plan.swap
        slot_ch = channels.slots[swap.t]
        h12s, h22s = slot_ch.h12, slot_ch.h22
        nullb = numerics.null_space_basis(h12s, tol)[:, : len(swap.v_ids)]
        comp = numerics.null_space_basis(nullb.conj().T, tol)
        comp = comp[:, : len(swap.retransmit)]
        x2 = nullb @ mv[list(swap.v_ids)] + comp @ np.array(
            [replay(ref) for ref in swap.retransmit]
        )
        vals = solve(h12s @ comp, h12s @ x2)
        for ref, val in zip(swap.retransmit, vals):
            s12_vals[ref] = complex(val)
        # The clean receiver already decoded every replayed row during
        # the blocks; cancel them and recover the two extra symbols.
        y2s = h22s @ x2 - (h22s @ comp) @ np.array(
            [clean_vals[ref] for ref in swap.retransmit]
        )
        mv_hat[list(swap.v_ids)] = solve(h22s @ nullb, y2s)

    # Resolve over-packed slots now that the swap pinned one row each.
    for slot, y1c, hp2, hpay, pure_rhs, pure_coef in deferred:
        k = len(slot.u_ids)
        refs = [ref for ref in slot.payload if ref.kind == "s12"]
        have = [i for i, ref in enumerate(refs) if ref in s12_vals]
        missing = [i for i, ref in enumerate(refs) if ref not in s12_vals]
        rhs = pure_rhs.copy()
        for i in have:
            rhs -= pure_coef[:, i] * s12_vals[refs[i]]
        if missing:
            sol = solve(pure_coef[:, missing], rhs)
            for i, val in zip(missing, sol):
                s12_vals[refs[i]] = complex(val)
        vals = np.array([s12_vals[ref] for ref in refs])
        mu_hat[list(slot.u_ids)] = solve(hp2, y1c - hpay @ vals)

    # Strip phase-1 interference and recover the confined symbols.
    for slot in plan.phase1:
        sent = len(slot.u_ids)
        if not sent:
            continue
        rhs = rot[slot.t][:sent].copy()
        for r in range(sent):
            rhs[r] -= s12_vals[LedgerRef("s12", slot.t, r)]
        mu_hat[list(slot.u_ids)] = solve(des[slot.t], rhs)

    # Clean receiver: per-slot data solve from direct rows plus ledger.
    refs_by_slot: dict[int, list[LedgerRef]] = {}
    for ref in plan.s12 + plan.s2:
        refs_by_slot.setdefault(ref.slot, []).append(ref)
    for slot in plan.phase1:
        refs = sorted(refs_by_slot.get(slot.t, []), key=lambda r: r.row)
        mat = np.vstack(
            [h22cat[slot.t]] + [icoef[slot.t][ref.row][None, :] for ref in refs]
        )
        vec = np.concatenate(
            [direct[slot.t], np.array([clean_vals[ref] for ref in refs])]
        )
        mv_hat[list(slot.v_ids)] = solve(mat, vec)

    return mu_hat, mv_hat
