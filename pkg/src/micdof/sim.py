"""Monte-Carlo driver: run a scheme over random channels, then check the
achieved DoF pair against the exact rational region.

Trial streams are seeded hierarchically, so a report is reproducible
from (config, model, corner, trials, seed) alone, and adding trials
never perturbs earlier ones. The random half only ever produces floats;
every verdict about the DoF point itself is computed in exact rational
arithmetic on the other side of the cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from micdof import numerics, regions, schemes
from micdof.channel import AntennaConfig, UnknownName, sample_realization

SIM_MODELS = ("hybrid1", "hybrid2", "alternating")

# A clean noise-free decode sits many orders below this; anything above
# means a wiring error rather than conditioning bad luck.
SUCCESS_ERROR_CEILING = 1e-6

MAX_RESAMPLES = 3


@dataclass(frozen=True)
class SimReport:
    """Aggregate outcome of a Monte-Carlo run."""

    cfg: AntennaConfig
    model: str
    corner: str
    seed: int
    trials: int
    successes: int
    resampled_degenerate: int
    max_rel_error: float
    min_conditioning: float
    achieved_dof: tuple[Fraction, Fraction]


def plan_for(cfg: AntennaConfig, model: str, corner: str = "primary"):
    """The transmission plan a simulation of this request would run."""
    if model == "alternating":
        if cfg.as_tuple() != (4, 5, 3, 2):
            raise schemes.NotApplicable(
                f"the alternating plan is defined for (4,5,3,2), not {cfg}"
            )
        return schemes.alternating_plan_4532()
    if model not in schemes.HIA_MODELS:
        raise UnknownName(f"no symbol-level scheme for model {model!r}")
    params = schemes.hia_parameters(cfg, model, corner)
    return schemes.build_plan(cfg, params, model)


def monte_carlo(
    cfg: AntennaConfig,
    model: str,
    corner: str = "primary",
    trials: int = 100,
    seed: int = 42,
) -> SimReport:
    """Run ``trials`` independent symbol-level executions.

    Each trial draws fresh channels and data from its own child stream.
    A rank-degenerate draw (measure zero, but floats) is resampled up
    to MAX_RESAMPLES times and counted; a trial succeeds when it
    decodes with rank_ok and relative error under the ceiling.
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    plan = plan_for(cfg, model, corner)
    successes = 0
    resampled = 0
    max_err = 0.0
    min_cond = 1.0
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        for attempt in range(1 + MAX_RESAMPLES):
            channels = sample_realization(cfg, plan.t_total, rng)
            u = numerics.sample_gaussian(plan.d1_star, 1, rng)[:, 0]
            v = numerics.sample_gaussian(plan.d2_star, 1, rng)[:, 0]
            outcome = schemes.execute_and_decode(plan, channels, (u, v))
            if outcome.rank_ok:
                break
            resampled += 1
        min_cond = min(min_cond, outcome.min_conditioning)
        if outcome.rank_ok and outcome.max_rel_error <= SUCCESS_ERROR_CEILING:
            successes += 1
            max_err = max(max_err, outcome.max_rel_error)
    return SimReport(
        cfg=cfg,
        model=model,
        corner=corner,
        seed=seed,
        trials=trials,
        successes=successes,
        resampled_degenerate=resampled,
        max_rel_error=max_err,
        min_conditioning=min_cond,
        achieved_dof=plan.dof(),
    )


@dataclass(frozen=True)
class BoundExcess:
    """One region inequality the point exceeds: value > limit, exact."""

    model: str
    label: str
    value: Fraction
    limit: Fraction


@dataclass(frozen=True)
class CrossCheck:
    """Exact verdict on where the achieved DoF point sits.

    For a hybrid run the verdict is one of "vertex", "boundary",
    "interior", "outside" against that model's region, with the tight
    bound labels listed. For the alternating run the point is tested
    against both hybrid regions; "outside-both" certifies it exceeds at
    least one inequality of each, itemized in ``excesses``.
    """

    point: tuple[Fraction, Fraction]
    verdict: str
    tight: tuple[str, ...] = ()
    excesses: tuple[BoundExcess, ...] = ()


def _excesses(cfg: AntennaConfig, model: str, point) -> list[BoundExcess]:
    d1, d2 = point
    out = []
    for bound in regions.bounds_for(cfg, model):
        if not bound.satisfied(d1, d2):
            out.append(
                BoundExcess(
                    model=model, label=bound.label, value=bound.value(d1, d2),
                    limit=bound.c,
                )
            )
    return out


def cross_check(report: SimReport, cfg: AntennaConfig, model: str) -> CrossCheck:
    """Place the report's achieved DoF pair exactly.

    cfg and model must match the report; they are explicit so a caller
    cannot accidentally check one run against another run's region.
    """
    if cfg != report.cfg or model != report.model:
        raise ValueError(
            f"report is for {report.cfg}/{report.model}, "
            f"asked to check {cfg}/{model}"
        )
    point = report.achieved_dof
    d1, d2 = point
    if model == "alternating":
        excesses = _excesses(cfg, "hybrid1", point) + _excesses(cfg, "hybrid2", point)
        hit_models = {e.model for e in excesses}
        verdict = "outside-both" if hit_models == {"hybrid1", "hybrid2"} else "inside-some"
        return CrossCheck(point=point, verdict=verdict, excesses=tuple(excesses))
    reg = regions.region(cfg, model)
    if point in reg.vertices:
        verdict = "vertex"
    elif not reg.contains(d1, d2):
        verdict = "outside"
    elif reg.on_boundary(d1, d2):
        verdict = "boundary"
    else:
        verdict = "interior"
    tight = tuple(b.label for b in reg.bounds if b.tight_at(d1, d2))
    return CrossCheck(point=point, verdict=verdict, tight=tight)
