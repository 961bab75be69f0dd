"""Command-line interface.

    growthlab gap       --group free:2 --subgroup sub.txt --g0 ab --rmax 12
    growthlab quotient  --group free:2 --subgroup sub.txt --rmax 14
    growthlab amalgam   --group free:2 --subgroup sub.txt --g0 b -M 1 --syllables 6
    growthlab audit     --group free:2 --axis ab --rmax 5
    growthlab buffering --chain chain.json
    growthlab closure   --group free:2 --g0 ab --radius 6
    growthlab selector  --group free:2 --subgroup sub.txt --g0 b --rmax 5

Subgroup files carry one generator word per line (``a b A`` style, upper
case = inverse).  A chain spec is JSON:
{"group": "free:2", "subgroup": ["a"], "g": "b",
 "word": [["h","a"],["k","bbb"]], "radius": 2}.
--config loads any of the flags from a JSON file; explicit flags win.

Exit codes: 0 pass/complete, 2 hypothesis failed, 3 counterexample found,
4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .audits import constriction_audit, elementary_properties_audit
from .axes import Axis, ProjectionMap
from .buffering import BufferingParams, build_axis_chain, check_buffering, chain_separation
from .closure import elementary_closure, find_selector_power
from .errors import (BudgetExceeded, CounterexampleFound, GrowthLabError,
                     HypothesisFailed)
from .groups import MarkedGroup
from .orbits import FreeSubgroup
from .reports import (flatten_for_csv, growth_records, render_csv, render_json,
                      write_text)
from .theorems import (ExperimentConfig, amalgam_injectivity,
                       coarse_quotient_check, verify_growth_gap,
                       verify_quotient_growth)

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_COUNTEREXAMPLE = 3
EXIT_BUDGET = 4


def _read_subgroup(path: str | None) -> tuple[str, ...]:
    if not path:
        return ()
    with open(path) as fh:
        return tuple(line.strip() for line in fh if line.strip())


def _emit(payload: dict, args, records=None) -> None:
    if args.format == "csv":
        rows = records if records is not None else flatten_for_csv(payload)
        write_text(render_csv(rows), args.out)
    else:
        write_text(render_json(payload), args.out)


def _experiment_config(args) -> ExperimentConfig:
    gens = _read_subgroup(getattr(args, "subgroup", None))
    kwargs = dict(group=args.group, subgroup=gens, g0=getattr(args, "g0", "") or "")
    if getattr(args, "rmax", None):
        kwargs["r_ball"] = min(args.rmax, 14)
        kwargs["r_schreier"] = args.rmax
    if getattr(args, "margin", None):
        kwargs["gap_margin"] = args.margin
    return ExperimentConfig(**kwargs)


def cmd_gap(args) -> int:
    cfg = _experiment_config(args)
    try:
        report = verify_growth_gap(cfg)
    except HypothesisFailed as exc:
        _emit(exc.report.to_dict(), args)
        return EXIT_HYPOTHESIS
    payload = report.to_dict()
    records = None
    if args.format == "csv":
        from .balls import BallCounts
        spheres = report.details["h_counts"]
        cum = []
        total = 0
        for s in spheres:
            total += s
            cum.append(total)
        counts = BallCounts(radius=len(spheres) - 1, sphere_sizes=tuple(spheres),
                            cumulative=tuple(cum))
        records = growth_records(counts, report.omega_h)
    _emit(payload, args, records)
    return EXIT_OK if report.verdict == "PASS" else EXIT_HYPOTHESIS


def cmd_quotient(args) -> int:
    cfg = _experiment_config(args)
    if args.max_states is not None:
        # pre-flight the coset BFS under the configured state budget
        from .schreier import schreier_growth
        sub = cfg.free_subgroup()
        schreier_growth(sub.core, cfg.r_schreier, max_states=args.max_states)
    try:
        report = verify_quotient_growth(cfg)
    except HypothesisFailed as exc:
        _emit(exc.report.to_dict(), args)
        return EXIT_HYPOTHESIS
    records = None
    if args.format == "csv":
        records = [{"radius": r, "count": c, "rate_estimate": report.omega_quotient}
                   for r, c in enumerate(report.details["coset_counts"])]
    _emit(report.to_dict(), args, records)
    return EXIT_OK if report.verdict == "PASS" else EXIT_HYPOTHESIS


def cmd_amalgam(args) -> int:
    group = MarkedGroup.from_descriptor(args.group)
    sub = FreeSubgroup.from_words(group, [group.parse(w) for w in _read_subgroup(args.subgroup)])
    g = group.parse(args.g0)
    try:
        report = amalgam_injectivity(sub, g, M=args.power, n_syllables=args.syllables,
                                     letter_cap=args.letter_cap)
    except CounterexampleFound as exc:
        _emit({"verdict": "COUNTEREXAMPLE", "witness": exc.witness}, args)
        return EXIT_COUNTEREXAMPLE
    _emit(report, args)
    return EXIT_OK


def cmd_audit(args) -> int:
    group = MarkedGroup.from_descriptor(args.group)
    g = group.parse(args.axis)
    pm = ProjectionMap(Axis(g))
    r = args.rmax or 4
    rep = constriction_audit(pm, r)
    table = elementary_properties_audit(pm, None, min(r, 4))
    payload = {
        "axis": args.axis,
        "constriction": rep,
        "properties": table.property_rows(),
        "sigma_table": table.sigma_table,
        "zeta_table": table.zeta_table,
    }
    _emit(payload, args)
    return EXIT_OK


def cmd_buffering(args) -> int:
    with open(args.chain) as fh:
        spec = json.load(fh)
    group = MarkedGroup.from_descriptor(spec["group"])
    sub = FreeSubgroup.from_words(group, [group.parse(w) for w in spec["subgroup"]])
    g = group.parse(spec["g"])
    letters = [group.parse(w) for _, w in spec["word"]]
    chain = build_axis_chain(sub, g, letters, spec.get("radius", 2))
    params = BufferingParams(spec.get("delta", 0), spec.get("epsilon", 2),
                             spec.get("L", 1))
    verdict = check_buffering(chain, params)
    payload = {"check": verdict, "params": params}
    if verdict.passed and spec.get("theta") is not None:
        payload["separation"] = chain_separation(chain, params, spec["theta"])
    _emit(payload, args)
    return EXIT_OK if verdict.passed else EXIT_HYPOTHESIS


def cmd_closure(args) -> int:
    group = MarkedGroup.from_descriptor(args.group)
    g = group.parse(args.g0)
    desc = elementary_closure(g, args.radius)
    payload = {
        "g": args.g0,
        "M": desc.M,
        "E_gens": [str(w) for w in desc.E_generators],
        "E_plus_index": desc.E_plus_index,
        "index_over_cyclic": desc.index_over_cyclic,
        "certificates": {"conjugation_identities": desc.verify(),
                         "elements_scanned": len(desc.elements)},
    }
    _emit(payload, args)
    return EXIT_OK


def cmd_selector(args) -> int:
    group = MarkedGroup.from_descriptor(args.group)
    sub = FreeSubgroup.from_words(group, [group.parse(w) for w in _read_subgroup(args.subgroup)])
    g = group.parse(args.g0)
    m, sel = find_selector_power(g, epsilon=args.epsilon, theta=args.theta,
                                 y=group.identity(), sample_radius=args.rmax or 5)
    report = coarse_quotient_check(sub, g, sel, args.rmax or 5)
    payload = {"M": m, "threshold": sel.threshold, "coarse_quotient": report}
    _emit(payload, args)
    return EXIT_OK if report.verdict == "PASS" else EXIT_HYPOTHESIS


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    with open(path) as fh:
        data = json.load(fh)
    injected = []
    for key, value in data.items():
        flag = "--" + key.replace("_", "-")
        if flag not in argv:
            injected.extend([flag, str(value)])
    return argv[:i] + argv[i + 2:] + injected


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="growthlab",
                                     description="desk-scale growth experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, subgroup=False, g0=False):
        p.add_argument("--group", required=True, help="free:K or product:M1,M2,...")
        if subgroup:
            p.add_argument("--subgroup", help="file with one generator word per line")
        if g0:
            p.add_argument("--g0", help="distinguished element (ASCII word)")
        p.add_argument("--rmax", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("gap", help="growth-gap pipeline")
    common(p, subgroup=True, g0=True)
    p.add_argument("--margin", type=float, default=None)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("quotient", help="quotient-growth pipeline")
    common(p, subgroup=True, g0=True)
    p.add_argument("--max-states", type=int, default=None,
                   help="coset state budget for the Schreier BFS")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("amalgam", help="amalgam injectivity refutation attempt")
    common(p, subgroup=True, g0=True)
    p.add_argument("-M", "--power", type=int, default=1)
    p.add_argument("--syllables", type=int, default=4)
    p.add_argument("--letter-cap", type=int, default=4)
    p.set_defaults(func=cmd_amalgam)

    p = sub.add_parser("audit", help="constriction and projection property audit")
    p.add_argument("--group", required=True)
    p.add_argument("--axis", required=True)
    p.add_argument("--rmax", type=int, default=4)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("buffering", help="check a chain spec file")
    p.add_argument("--chain", required=True, help="JSON chain spec")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_buffering)

    p = sub.add_parser("closure", help="elementary closure scan")
    p.add_argument("--group", required=True)
    p.add_argument("--g0", required=True)
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("selector", help="separation selector and coarse quotient check")
    common(p, subgroup=True, g0=True)
    p.add_argument("--epsilon", type=int, default=0)
    p.add_argument("--theta", type=int, default=1)
    p.set_defaults(func=cmd_selector)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    argv = _apply_config_file(parser, argv)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CounterexampleFound as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    except HypothesisFailed as exc:
        print(f"{exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except GrowthLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
