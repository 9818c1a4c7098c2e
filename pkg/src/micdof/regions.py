"""Exact rational DoF-region engine.

Every region here is a 2-D polytope cut out of the nonnegative quadrant
by a handful of linear outer bounds whose coefficients are ratios of
antenna counts. All arithmetic is `fractions.Fraction`; no floats enter
this module, so corner points such as (9/5, 2) compare as identities.

The bound catalogue (labels L01, L02, L1..L5) covers four fully
characterized side-information models: both transmitters with delayed
knowledge of their unpaired receivers' channels, the two one-sided
instant/delayed mixtures ("hybrid1" has T1 instant, "hybrid2" has T2
instant), and full instantaneous knowledge. L4 and L5 are conditional
bounds that activate only under a strict antenna-ordering chain.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from micdof.channel import AntennaConfig, CsitModel, CsitState, UnknownName

RationalPoint = tuple[Fraction, Fraction]

REGION_MODELS = ("delayed", "hybrid1", "hybrid2", "instantaneous")


@dataclass(frozen=True)
class LinearBound:
    """The halfplane a1*d1 + a2*d2 <= c, with its catalogue label."""

    a1: Fraction
    a2: Fraction
    c: Fraction
    label: str

    def __post_init__(self) -> None:
        if self.a1 == 0 and self.a2 == 0:
            raise ValueError("degenerate bound: both coefficients zero")

    def value(self, d1: Fraction, d2: Fraction) -> Fraction:
        return self.a1 * d1 + self.a2 * d2

    def satisfied(self, d1: Fraction, d2: Fraction) -> bool:
        return self.value(d1, d2) <= self.c

    def tight_at(self, d1: Fraction, d2: Fraction) -> bool:
        return self.value(d1, d2) == self.c

    def __str__(self) -> str:
        return f"{self.label}: ({self.a1})*d1 + ({self.a2})*d2 <= {self.c}"


@dataclass(frozen=True)
class DofRegion:
    """Bound list plus the enumerated vertex cycle, counterclockwise.

    Vertices start at (0, 0) (the origin is feasible for every bound
    catalogue entry, all of which have positive right-hand sides) and
    are free of duplicates and collinear intermediates.
    """

    bounds: tuple[LinearBound, ...]
    vertices: tuple[RationalPoint, ...]

    def contains(self, d1: Fraction, d2: Fraction) -> bool:
        """Exact membership: inside or on the boundary."""
        if d1 < 0 or d2 < 0:
            return False
        return all(b.satisfied(d1, d2) for b in self.bounds)

    def on_boundary(self, d1: Fraction, d2: Fraction) -> bool:
        if not self.contains(d1, d2):
            return False
        return (
            d1 == 0
            or d2 == 0
            or any(b.tight_at(d1, d2) for b in self.bounds)
        )

    def area2(self) -> Fraction:
        """Twice the polygon area (exact; positive for the CCW cycle)."""
        total = Fraction(0)
        verts = self.vertices
        for (x1, y1), (x2, y2) in zip(verts, verts[1:] + verts[:1]):
            total += x1 * y2 - x2 * y1
        return total


def condition_holds(cfg: AntennaConfig, i: int) -> bool:
    """Strict antenna-ordering chain that activates bound L4 (i=1) or L5 (i=2).

    The chain for index i (with j the other user) is
    M_i > N1+N2-M_j > N_i > N_j > M_j > N_j(N_j-M_j)/(N_i-M_j),
    evaluated exactly. It requires N_i > N_j strictly, so with the
    canonical ordering n1 >= n2 the i=2 variant can never hold.
    """
    if i not in (1, 2):
        raise ValueError(f"condition index must be 1 or 2, got {i}")
    m = {1: cfg.m1, 2: cfg.m2}
    n = {1: cfg.n1, 2: cfg.n2}
    j = 3 - i
    chain = [
        Fraction(m[i]),
        Fraction(cfg.n1 + cfg.n2 - m[j]),
        Fraction(n[i]),
        Fraction(n[j]),
        Fraction(m[j]),
    ]
    if any(a <= b for a, b in zip(chain, chain[1:])):
        return False
    # The chain already guarantees n[i] > m[j], so the final ratio is finite.
    tail = Fraction(n[j] * (n[j] - m[j]), n[i] - m[j])
    return chain[-1] > tail


def _bound_l01(cfg: AntennaConfig) -> LinearBound:
    return LinearBound(Fraction(1), Fraction(0), Fraction(min(cfg.m1, cfg.n1)), "L01")


def _bound_l02(cfg: AntennaConfig) -> LinearBound:
    return LinearBound(Fraction(0), Fraction(1), Fraction(min(cfg.m2, cfg.n2)), "L02")


def _bound_l1(cfg: AntennaConfig) -> LinearBound:
    m1, m2, n1, n2 = cfg.m1, cfg.m2, cfg.n1, cfg.n2
    return LinearBound(
        Fraction(1, min(n1 + n2, m1)),
        Fraction(1, min(n2, m1)),
        Fraction(min(n2, m1 + m2), min(n2, m1)),
        "L1",
    )


def _bound_l2(cfg: AntennaConfig) -> LinearBound:
    m1, m2, n1, n2 = cfg.m1, cfg.m2, cfg.n1, cfg.n2
    return LinearBound(
        Fraction(1, min(n1, m2)),
        Fraction(1, min(n1 + n2, m2)),
        Fraction(min(n1, m1 + m2), min(n1, m2)),
        "L2",
    )


def _bound_l3(cfg: AntennaConfig) -> LinearBound:
    m1, m2, n1, n2 = cfg.m1, cfg.m2, cfg.n1, cfg.n2
    c = min(m1 + m2, n1 + n2, max(m1, n2), max(m2, n1))
    return LinearBound(Fraction(1), Fraction(1), Fraction(c), "L3")


def _bound_l4(cfg: AntennaConfig) -> LinearBound:
    m2, n1, n2 = cfg.m2, cfg.n1, cfg.n2
    return LinearBound(
        Fraction(1), Fraction(n1 + 2 * n2 - m2, n2), Fraction(n1 + n2), "L4"
    )


def _bound_l5(cfg: AntennaConfig) -> LinearBound:
    m1, n1, n2 = cfg.m1, cfg.n1, cfg.n2
    return LinearBound(
        Fraction(n2 + 2 * n1 - m1, n1), Fraction(1), Fraction(n1 + n2), "L5"
    )


def bounds_for(cfg: AntennaConfig, model_name: str) -> list[LinearBound]:
    """The active outer bounds of the given model at this config.

    hybrid1 carries L2 (plus L5 when its condition fires), hybrid2
    carries the mirrored L1 (plus conditional L4), the delayed model
    carries both sides, and the instantaneous model needs only the
    single-user caps and the sum bound L3.
    """
    if model_name not in REGION_MODELS:
        raise UnknownName(
            f"no characterized region for {model_name!r} "
            f"(choose from {', '.join(REGION_MODELS)})"
        )
    bounds = [_bound_l01(cfg), _bound_l02(cfg), _bound_l3(cfg)]
    if model_name in ("delayed", "hybrid2"):
        bounds.append(_bound_l1(cfg))
        if condition_holds(cfg, 1):
            bounds.append(_bound_l4(cfg))
    if model_name in ("delayed", "hybrid1"):
        bounds.append(_bound_l2(cfg))
        if condition_holds(cfg, 2):
            bounds.append(_bound_l5(cfg))
    return bounds


def _intersect(
    a1: Fraction, a2: Fraction, c: Fraction, b1: Fraction, b2: Fraction, d: Fraction
) -> RationalPoint | None:
    """Intersection of two lines a1 x + a2 y = c and b1 x + b2 y = d."""
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    x = (c * b2 - a2 * d) / det
    y = (a1 * d - c * b1) / det
    return (x, y)


def _hull_ccw(points: Iterable[RationalPoint]) -> tuple[RationalPoint, ...]:
    """Convex hull by monotone chain, collinear points dropped, CCW order."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)

    def cross(o: RationalPoint, a: RationalPoint, b: RationalPoint) -> Fraction:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[RationalPoint] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[RationalPoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    # Monotone chain starts at the lexicographic minimum, which for these
    # regions is always the origin; keep that convention explicit.
    start = hull.index(min(hull))
    return tuple(hull[start:] + hull[:start])


def region(cfg: AntennaConfig, model_name: str) -> DofRegion:
    """Enumerate the model's DoF polytope at this config, exactly.

    Candidate vertices are the pairwise intersections of all boundary
    lines (the bounds plus both axes); those satisfying every bound
    survive, and their convex hull, counterclockwise from the origin,
    is the region.
    """
    bounds = bounds_for(cfg, model_name)
    lines: list[tuple[Fraction, Fraction, Fraction]] = [
        (b.a1, b.a2, b.c) for b in bounds
    ]
    lines.append((Fraction(1), Fraction(0), Fraction(0)))  # d1 axis wall
    lines.append((Fraction(0), Fraction(1), Fraction(0)))  # d2 axis wall

    candidates: list[RationalPoint] = []
    for (a1, a2, c), (b1, b2, d) in itertools.combinations(lines, 2):
        point = _intersect(a1, a2, c, b1, b2, d)
        if point is None:
            continue
        d1, d2 = point
        if d1 < 0 or d2 < 0:
            continue
        if all(b.satisfied(d1, d2) for b in bounds):
            candidates.append(point)

    return DofRegion(bounds=tuple(bounds), vertices=_hull_ccw(candidates))


class Relation(enum.Enum):
    """Outcome of an exact set comparison of two regions."""

    EQUAL = "="
    STRICT_SUBSET = "⊂"
    STRICT_SUPERSET = "⊃"
    INCOMPARABLE = "≠"


def compare(ra: DofRegion, rb: DofRegion) -> Relation:
    """Exact containment comparison via mutual vertex membership.

    A convex region is inside another exactly when all of its vertices
    satisfy the other's bounds, so two vertex sweeps decide the relation.
    """
    a_in_b = all(rb.contains(*v) for v in ra.vertices)
    b_in_a = all(ra.contains(*v) for v in rb.vertices)
    if a_in_b and b_in_a:
        return Relation.EQUAL
    if a_in_b:
        return Relation.STRICT_SUBSET
    if b_in_a:
        return Relation.STRICT_SUPERSET
    return Relation.INCOMPARABLE


class CaseLabel(enum.Enum):
    """Row of the case table that a canonical config falls into."""

    CASE_0 = "0"
    A_I_1 = "A.I.1"
    A_I_2 = "A.I.2"
    A_I_3A = "A.I.3a"
    A_I_3B = "A.I.3b"
    A_II = "A.II"
    B = "B"


@dataclass(frozen=True)
class RegionCase:
    """Case-table row, with the scheme sub-case per hybrid model when the
    row is A.I.3b (None otherwise)."""

    label: CaseLabel
    hybrid1_subcase: str | None = None
    hybrid2_subcase: str | None = None


def _hybrid1_subcase(m1: int, m2: int, n1: int, n2: int) -> str:
    # Effective transmit antennas: beyond n1+n2 at T2 they cannot add DoF,
    # and the sub-case split is defined on the trimmed counts.
    m2 = min(m2, n1 + n2)
    if m2 <= m1:
        return "I"
    if n1 * (m2 - n2) <= m2 * (m1 - n2):
        return "II"
    return "III"


def _hybrid2_subcase(m1: int, m2: int, n1: int, n2: int) -> str:
    # Mirrored split: T1 is the flooding transmitter, R1 the quiet receiver.
    m1 = min(m1, n1 + n2)
    if m1 <= m2:
        return "I"
    if n2 * (m1 - n1) <= m1 * (m2 - n1):
        return "II"
    return "III"


def classify(cfg: AntennaConfig) -> RegionCase:
    """Place a canonical config in its case-table row.

    The tree splits on how the cross-transmitter antenna counts compare
    with the receive counts; exactly one row matches. For the A.I.3b row
    (both transmitters strictly larger than both receivers) the scheme
    sub-case is computed per hybrid model on effective antenna counts.
    """
    m1, m2, n1, n2 = cfg.m1, cfg.m2, cfg.n1, cfg.n2
    if n2 >= m1:
        return RegionCase(CaseLabel.CASE_0)
    if n2 > m2:
        return RegionCase(CaseLabel.B)
    # Case A: m1 > n2 and m2 >= n2.
    if m2 < n1:
        return RegionCase(CaseLabel.A_II)
    # Case A.I: m2 >= n1.
    if m1 <= n1:
        return RegionCase(CaseLabel.A_I_1)
    if m2 == n2:
        return RegionCase(CaseLabel.A_I_2)
    # m1 > n1 and m2 > n2 from here on.
    if m2 == n1:
        return RegionCase(CaseLabel.A_I_3A)
    return RegionCase(
        CaseLabel.A_I_3B,
        hybrid1_subcase=_hybrid1_subcase(m1, m2, n1, n2),
        hybrid2_subcase=_hybrid2_subcase(m1, m2, n1, n2),
    )


def relation_strings(cfg: AntennaConfig) -> tuple[str, str]:
    """Computed comparison chains, one per hybrid model.

    Returns strings like "D^d ⊂ D^h1 = D^i", built from actual
    region comparisons rather than table lookups, so the published case
    table can be checked against them.
    """
    delayed = region(cfg, "delayed")
    instant = region(cfg, "instantaneous")
    chains = []
    for name, tag in (("hybrid1", "h1"), ("hybrid2", "h2")):
        mid = region(cfg, name)
        left = compare(delayed, mid).value
        right = compare(mid, instant).value
        chains.append(f"D^d {left} D^{tag} {right} D^i")
    return (chains[0], chains[1])


class ModelClass(enum.Enum):
    """Region family that a side-information octuple is known to share."""

    HYBRID1 = "hybrid1"
    HYBRID2 = "hybrid2"
    INSTANT = "instantaneous"
    DELAYED = "delayed"
    UNKNOWN = "unknown"


def classify_octuple(model: CsitModel) -> ModelClass:
    """Map an octuple to the characterized region family it belongs to.

    The deciding coordinates are what each transmitter knows about the
    cross channel into its unpaired receiver (t1:h21 and t2:h12), with
    the direct channel of the delayed side (t2:h11 or t1:h22) needing at
    least delayed knowledge. Octuples outside the four families get
    UNKNOWN rather than a guess.
    """
    instant = CsitState.INSTANT
    delayed = CsitState.DELAYED
    t1_cross = model.state("t1", "h21")
    t2_cross = model.state("t2", "h12")
    if t1_cross is instant and t2_cross is instant:
        return ModelClass.INSTANT
    if (
        t1_cross is instant
        and t2_cross is delayed
        and model.state("t2", "h11") in (delayed, instant)
    ):
        return ModelClass.HYBRID1
    if (
        t2_cross is instant
        and t1_cross is delayed
        and model.state("t1", "h22") in (delayed, instant)
    ):
        return ModelClass.HYBRID2
    if (
        t1_cross is delayed
        and t2_cross is delayed
        and model.state("t1", "h22") in (delayed, instant)
        and model.state("t2", "h11") in (delayed, instant)
    ):
        return ModelClass.DELAYED
    return ModelClass.UNKNOWN
