"""Command-line front end.

Subcommands: ``region`` (bounds and exact vertices), ``classify``
(case-table row plus computed region relations), ``models`` (octuple
census), ``simulate`` (symbol-level Monte-Carlo with an exact
cross-check), and ``export`` (deterministic JSON region documents plus
a CSV index for downstream tooling).

All rational output is printed reduced; JSON documents serialize every
rational as a reduced [numerator, denominator] pair with sorted keys,
so re-running an export is byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from micdof import regions, schemes, sim
from micdof.channel import (
    AntennaConfig,
    CsitModel,
    CsitState,
    UnknownName,
    ZeroAntennas,
    canonical_sweep,
    canonicalize,
    enumerate_octuples,
)

DEFAULT_SEED = 42
DEFAULT_TRIALS = 100


def _parse_config(text: str) -> AntennaConfig:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"config must be M1,M2,N1,N2 - got {text!r}")
    try:
        counts = [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"config must be four integers - got {text!r}") from None
    return canonicalize(*counts)


def _fraction_pair(f: Fraction) -> list[int]:
    return [f.numerator, f.denominator]


def _point(p: tuple[Fraction, Fraction]) -> str:
    return f"({p[0]}, {p[1]})"


def export_document(
    cfg: AntennaConfig,
    model: str,
    relations: tuple[str, str] | None = None,
    sim_section: dict | None = None,
) -> dict:
    """Region document for one (config, model) pair.

    Rationals appear as reduced [numerator, denominator] pairs; the
    relation chains are computed from the regions themselves unless the
    caller already has them.
    """
    case = regions.classify(cfg)
    reg = regions.region(cfg, model)
    rel_h1, rel_h2 = relations if relations is not None else regions.relation_strings(cfg)
    doc = {
        "config": {
            "m1": cfg.m1,
            "m2": cfg.m2,
            "n1": cfg.n1,
            "n2": cfg.n2,
            "swapped": cfg.swapped,
        },
        "model": model,
        "case": case.label.value,
        "bounds": [
            {
                "label": b.label,
                "a1": _fraction_pair(b.a1),
                "a2": _fraction_pair(b.a2),
                "c": _fraction_pair(b.c),
            }
            for b in reg.bounds
        ],
        "vertices": [[_fraction_pair(x), _fraction_pair(y)] for x, y in reg.vertices],
        "relations": {"hybrid1": rel_h1, "hybrid2": rel_h2},
    }
    if case.label is regions.CaseLabel.A_I_3B:
        doc["subcases"] = {
            "hybrid1": case.hybrid1_subcase,
            "hybrid2": case.hybrid2_subcase,
        }
    if sim_section is not None:
        doc["sim"] = sim_section
    return doc


def dump_document(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _octuple_code(model: CsitModel) -> str:
    letters = "".join(state.value[0].upper() for state in model.states)
    return f"{letters[:4]} {letters[4:]}"


def _matching_classes(model: CsitModel) -> list[str]:
    """Independent re-derivation of the octuple census predicates.

    Deliberately not routed through regions.classify_octuple so the
    disjointness check exercises the rules, not the if/elif ordering.
    """
    instant, delayed, unknown = CsitState.INSTANT, CsitState.DELAYED, CsitState.UNKNOWN
    t1_cross = model.state("t1", "h21")
    t2_cross = model.state("t2", "h12")
    matches = []
    if t1_cross is instant and t2_cross is instant:
        matches.append("instantaneous")
    if t1_cross is instant and t2_cross is delayed and model.state("t2", "h11") is not unknown:
        matches.append("hybrid1")
    if t2_cross is instant and t1_cross is delayed and model.state("t1", "h22") is not unknown:
        matches.append("hybrid2")
    if (
        t1_cross is delayed
        and t2_cross is delayed
        and model.state("t1", "h22") is not unknown
        and model.state("t2", "h11") is not unknown
    ):
        matches.append("delayed")
    return matches


def _cmd_region(args: argparse.Namespace) -> int:
    cfg = _parse_config(args.config)
    reg = regions.region(cfg, args.model)
    print(f"config: {cfg}")
    print(f"model: {args.model}")
    print("bounds:")
    for bound in reg.bounds:
        print(f"  {bound}")
    print("vertices: " + ", ".join(_point(v) for v in reg.vertices))
    if args.json:
        path = Path(args.json)
        path.write_text(dump_document(export_document(cfg, args.model)), encoding="utf-8")
        print(f"wrote {path}")
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    cfg = _parse_config(args.config)
    case = regions.classify(cfg)
    print(f"config: {cfg}")
    print(f"case: {case.label.value}")
    if case.label is regions.CaseLabel.A_I_3B:
        print(f"hybrid1 sub-case: {case.hybrid1_subcase}")
        print(f"hybrid2 sub-case: {case.hybrid2_subcase}")
    print(f"extra sum bound for hybrid2/delayed (L4): {regions.condition_holds(cfg, 1)}")
    print(f"extra sum bound for hybrid1/delayed (L5): {regions.condition_holds(cfg, 2)}")
    rel_h1, rel_h2 = regions.relation_strings(cfg)
    print(f"relations: {rel_h1}; {rel_h2}")
    return 0


def _cmd_models(args: argparse.Namespace) -> int:
    counts: dict[str, int] = {}
    octuples = list(enumerate_octuples())
    for model in octuples:
        name = regions.classify_octuple(model).value
        counts[name] = counts.get(name, 0) + 1
    print(f"region families over all {len(octuples)} side-information octuples")
    print("(octuple code: one letter per slot, t1 then t2, h11 h12 h21 h22;")
    print(" U = unknown, D = delayed, I = instant)")
    order = ("instantaneous", "hybrid1", "hybrid2", "delayed", "unknown")
    for name in order:
        print(f"  {name:<15} {counts.get(name, 0):>5}")
    if args.filter:
        members = [
            m for m in octuples if regions.classify_octuple(m).value == args.filter
        ]
        print(f"octuples in {args.filter} ({len(members)}):")
        for model in members:
            print(f"  {_octuple_code(model)}")
    if args.check_disjoint:
        overlaps = 0
        mismatch = 0
        for model in octuples:
            matches = _matching_classes(model)
            if len(matches) > 1:
                overlaps += 1
            got = regions.classify_octuple(model).value
            expected = matches[0] if matches else "unknown"
            if got != expected:
                mismatch += 1
        if overlaps or mismatch:
            print(f"DISJOINTNESS FAILED: {overlaps} overlaps, {mismatch} mismatches")
            return 1
        print("disjoint: yes (every octuple matches at most one family)")
    return 0


def _sim_section(report: sim.SimReport, check: sim.CrossCheck) -> dict:
    return {
        "model": report.model,
        "corner": report.corner,
        "seed": report.seed,
        "trials": report.trials,
        "successes": report.successes,
        "resampled_degenerate": report.resampled_degenerate,
        "max_rel_error": report.max_rel_error,
        "min_conditioning": report.min_conditioning,
        "achieved_dof": [
            _fraction_pair(report.achieved_dof[0]),
            _fraction_pair(report.achieved_dof[1]),
        ],
        "verdict": check.verdict,
        "tight": list(check.tight),
    }


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _parse_config(args.config)
    model = "alternating" if args.alternating else args.model
    if model is None:
        raise ValueError("choose --model hybrid1|hybrid2|alternating (or --alternating)")
    if args.json and model == "alternating":
        raise ValueError("no region document for the alternating scheme")
    report = sim.monte_carlo(
        cfg, model, corner=args.corner, trials=args.trials, seed=args.seed
    )
    check = sim.cross_check(report, cfg, model)
    print(f"config: {cfg}")
    if model in schemes.HIA_MODELS:
        params = schemes.hia_parameters(cfg, model, args.corner)
        print(f"model: {model} (sub-case {params.case}, {args.corner} corner)")
        print(
            f"block: d1*={params.d1_star} d2*={params.d2_star} over "
            f"T={params.t_total} slots (t1={params.t1}, t2={params.t2}, x={params.x})"
        )
    else:
        print("model: alternating (three 5-slot blocks plus one role-swapped slot)")
    print(f"seed: {report.seed}")
    print(
        f"trials: {report.trials}  successes: {report.successes}  "
        f"degenerate resamples: {report.resampled_degenerate}"
    )
    print(f"max relative error: {report.max_rel_error:.3e}")
    print(f"min conditioning: {report.min_conditioning:.3e}")
    print(f"achieved DoF: {_point(report.achieved_dof)}")
    if model == "alternating":
        print(f"cross-check: {check.verdict}")
        for exc in check.excesses:
            print(f"  {exc.model} {exc.label}: {exc.value} > {exc.limit}")
    else:
        tight = f" (tight: {', '.join(check.tight)})" if check.tight else ""
        print(f"cross-check: {check.verdict}{tight}")
    if args.json:
        doc = export_document(cfg, model, sim_section=_sim_section(report, check))
        path = Path(args.json)
        path.write_text(dump_document(doc), encoding="utf-8")
        print(f"wrote {path}")
    if report.successes != report.trials:
        return 1
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    written = 0
    for cfg in canonical_sweep(args.sweep):
        relations = regions.relation_strings(cfg)
        case = regions.classify(cfg)
        for model in regions.REGION_MODELS:
            doc = export_document(cfg, model, relations=relations)
            name = f"region_{cfg.m1}-{cfg.m2}-{cfg.n1}-{cfg.n2}_{model}.json"
            (out / name).write_text(dump_document(doc), encoding="utf-8")
            written += 1
            if model == "hybrid1":
                relation = relations[0]
            elif model == "hybrid2":
                relation = relations[1]
            else:
                relation = f"{relations[0]}; {relations[1]}"
            rows.append(
                {
                    "config": f"{cfg.m1}x{cfg.m2}x{cfg.n1}x{cfg.n2}",
                    "model": model,
                    "case": case.label.value,
                    "vertices": len(doc["vertices"]),
                    "relation": relation,
                }
            )
    with (out / "index.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=["config", "model", "case", "vertices", "relation"],
            lineterminator="\n",
        )
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {written} region documents + index.csv to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="micdof",
        description="Exact DoF regions and symbol-level alignment schemes "
        "for the two-user MIMO interference channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_region = sub.add_parser("region", help="print a model's exact DoF region")
    p_region.add_argument("--config", required=True, help="M1,M2,N1,N2")
    p_region.add_argument("--model", required=True, choices=regions.REGION_MODELS)
    p_region.add_argument("--json", help="also write the region document here")
    p_region.set_defaults(func=_cmd_region)

    p_classify = sub.add_parser("classify", help="case-table row and relations")
    p_classify.add_argument("--config", required=True, help="M1,M2,N1,N2")
    p_classify.set_defaults(func=_cmd_classify)

    p_models = sub.add_parser("models", help="census of side-information octuples")
    p_models.add_argument(
        "--filter",
        choices=("instantaneous", "hybrid1", "hybrid2", "delayed", "unknown"),
        help="list every octuple in one family",
    )
    p_models.add_argument(
        "--check-disjoint",
        action="store_true",
        help="verify the family predicates never overlap",
    )
    p_models.set_defaults(func=_cmd_models)

    p_sim = sub.add_parser("simulate", help="symbol-level Monte-Carlo run")
    p_sim.add_argument("--config", required=True, help="M1,M2,N1,N2")
    p_sim.add_argument("--model", choices=sim.SIM_MODELS)
    p_sim.add_argument("--corner", choices=("primary", "secondary"), default="primary")
    p_sim.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p_sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_sim.add_argument(
        "--alternating",
        action="store_true",
        help="run the fixed 16-slot alternating plan (same as --model alternating)",
    )
    p_sim.add_argument("--json", help="write region document with sim section here")
    p_sim.set_defaults(func=_cmd_simulate)

    p_export = sub.add_parser("export", help="write region documents for a sweep")
    p_export.add_argument(
        "--sweep", type=int, required=True, help="max antenna count per side"
    )
    p_export.add_argument("--out", required=True, help="output directory")
    p_export.set_defaults(func=_cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        schemes.NotApplicable,
        schemes.NoSecondCorner,
        schemes.ScheduleInfeasible,
        UnknownName,
        ZeroAntennas,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
