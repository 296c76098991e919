"""Command-line entry point: ``shedkit <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error,
3 resource bound or step budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import drinfeld as dr
from .desing import g_desingularize, hilbert_basis, minimal_resolution_2d
from .errors import InvalidFanError, NonTermination, ResourceError, ShedkitError
from .fan import Fan
from .harness import (PROPERTIES, THEOREMS, artifact_stem, check_fan, replay, sweep,
                      sweep_summary, write_replay)
from .io import export_fan, fraction_str, parse_projection, read_fan, to_csv, vec_str

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

ENUM_COLUMNS = {
    "basic-invariants": ["kind", "d1", "d2", "d3", "d4", "lattice_point"],
    "shed-points": ["cone_index", "point", "l_value"],
    "hilbert-basis": ["cone_index", "point"],
    "2d-resolution": ["cone_index", "order", "point"],
}


class UsageError(Exception):
    pass


def _q(text: str) -> int:
    q = int(text)
    if q < 2:
        raise argparse.ArgumentTypeError(f"q must be at least 2, got {q}")
    return q


def _q_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    a, b = _q(lo), _q(hi)
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(a, b + 1))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _base_fan(args) -> Fan:
    """The fan an enumeration runs on; 2D constructions are taken unresolved."""
    if args.fan:
        return read_fan(args.fan)
    if args.construction is None or args.q is None:
        raise UsageError("give --fan FILE or --construction NAME with --q")
    if args.construction == "surface13":
        return Fan.from_cones([dr.surface13_cone(args.q)[0]])
    if args.construction == "m3fan":
        return dr.m3_fan(args.q)[0]
    return dr.build(args.construction, args.q)


# commands

def cmd_build(args) -> int:
    _emit(dr.build(args.name, args.q).to_json(), args.out)
    return EXIT_OK


def cmd_replay(args) -> int:
    theorem = args.theorem or args.theorem_pos
    if theorem is None:
        raise UsageError("replay needs a theorem")
    report = replay(theorem, args.q, verify=not args.no_verify)
    if args.out:
        write_replay(report, theorem, args.out)
    sys.stdout.write(report.body_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_check(args) -> int:
    props = [p.strip() for p in args.props.split(",") if p.strip()]
    unknown = set(props) - set(PROPERTIES)
    if unknown or not props:
        raise UsageError(f"unknown properties {sorted(unknown)}; choose from {', '.join(PROPERTIES)}")
    report = check_fan(read_fan(args.fan), props, name=Path(args.fan).name)
    text = report.body_json()
    _emit(text, args.out)
    if args.out:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_desing(args) -> int:
    fan = read_fan(args.fan)
    try:
        result = g_desingularize(fan, max_steps=args.max_steps)
    except NonTermination as exc:
        lines = [s.to_json(i + 1) for i, s in enumerate(exc.steps)]
        _emit("".join(line + "\n" for line in lines), args.log)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    log = "".join(s.to_json(i + 1) + "\n" for i, s in enumerate(result.steps))
    _emit(log, args.log)
    if args.out:
        Path(args.out).write_text(result.fan.to_json(), encoding="utf-8")
    if result.diagnostic:
        print(f"stopped: {result.diagnostic}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _enumerate_rows(args) -> list[dict]:
    if args.what == "basic-invariants":
        if args.q is None:
            raise UsageError("basic-invariants needs --q")
        kinds = [args.kind] if args.kind else None
        rows = []
        for e in dr.enumerate_basic_invariants(args.q, kinds):
            if not args.include_trivial and dr.is_generator_product(args.q, e):
                continue
            rows.append({"kind": e.kind, "d1": e.d1, "d2": e.d2, "d3": e.d3, "d4": e.d4,
                         "lattice_point": list(dr.exponent_to_lattice(args.q, e))})
        return rows
    fan = _base_fan(args)
    rows = []
    for i, cone in enumerate(fan.maximal_cones):
        if args.what == "shed-points":
            rows += [{"cone_index": i, "point": list(p), "l_value": fraction_str(cone.level(p))}
                     for p in cone.strict_shed_points()]
        elif args.what == "hilbert-basis":
            rows += [{"cone_index": i, "point": list(p)} for p in hilbert_basis(cone)]
        else:
            rows += [{"cone_index": i, "order": k, "point": list(p)}
                     for k, p in enumerate(minimal_resolution_2d(cone))]
    return rows


def cmd_enumerate(args) -> int:
    rows = _enumerate_rows(args)
    if args.format == "json":
        text = json.dumps(rows, indent=1) + "\n"
    else:
        flat = [{k: vec_str(v) if isinstance(v, list) else v for k, v in row.items()}
                for row in rows]
        text = to_csv(flat, ENUM_COLUMNS[args.what])
    _emit(text, args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    if args.fan:
        fan, title = read_fan(args.fan), Path(args.fan).stem
    elif args.construction and args.q is not None:
        fan, title = dr.build(args.construction, args.q), f"{args.construction}_q{args.q}"
    else:
        raise UsageError("give --fan FILE or --construction NAME with --q")
    projection = parse_projection(args.projection) if args.projection else None
    if args.format == "svg" and fan.dim == 3 and projection is None:
        raise UsageError("svg export of a 3D fan needs --projection")
    _emit(export_fan(fan, args.format, projection, title), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    theorems = THEOREMS if args.theorem in (None, "all") else (args.theorem,)
    results = sweep(args.q_range, theorems, jobs=args.jobs)
    summary = sweep_summary(results)
    if args.out:
        out = Path(args.out)
        for theorem, report in results:
            write_replay(report, theorem, out)
        (out / "sweep.json").write_text(json.dumps(summary, sort_keys=True, indent=1) + "\n",
                                        encoding="utf-8")
    for theorem, report in results:
        status = "PASS" if report.passed else "FAIL"
        print(f"{status} {artifact_stem(theorem, report.q)}")
    print(f"{summary['passed']}/{summary['total']} pass")
    return EXIT_OK if summary["passed"] == summary["total"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shedkit",
                                     description="Exact toric fan toolkit: sheds, G-desingularization, model replays.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a named construction as fan JSON")
    p.add_argument("name", choices=dr.NAMED_CONSTRUCTIONS)
    p.add_argument("--q", type=_q, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("replay", help="rebuild a model and verify its claims")
    p.add_argument("theorem_pos", nargs="?", choices=THEOREMS, metavar="THEOREM")
    p.add_argument("--theorem", choices=THEOREMS)
    p.add_argument("--q", type=_q, required=True)
    p.add_argument("--no-verify", action="store_true", help="only build the fan")
    p.add_argument("--out", help="directory for the fan JSON and report")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("check", help="evaluate predicates on a fan file")
    p.add_argument("--fan", required=True)
    p.add_argument("--props", default="regular", help=f"comma list of {','.join(PROPERTIES)}")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("desing", help="G-desingularize a fan file")
    p.add_argument("--fan", required=True)
    p.add_argument("--method", choices=["g"], default="g")
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--out", help="write the resulting fan JSON here")
    p.add_argument("--log", help="write the JSON-lines step log here (default stdout)")
    p.set_defaults(func=cmd_desing)

    p = sub.add_parser("enumerate", help="list invariants, shed points, Hilbert bases or 2D resolutions")
    p.add_argument("what", choices=list(ENUM_COLUMNS))
    p.add_argument("--q", type=_q)
    p.add_argument("--kind", choices=dr.KINDS)
    p.add_argument("--include-trivial", action="store_true")
    p.add_argument("--fan")
    p.add_argument("--construction", choices=dr.NAMED_CONSTRUCTIONS)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("export", help="render a fan as json, dot, svg or csv")
    p.add_argument("--fan")
    p.add_argument("--construction", choices=dr.NAMED_CONSTRUCTIONS)
    p.add_argument("--q", type=_q)
    p.add_argument("--format", choices=["json", "dot", "svg", "csv"], default="json")
    p.add_argument("--projection", help="x1x3, -x3x2 or a custom matrix 'a,b,c;d,e,f'")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("sweep", help="replay theorems over a range of q")
    p.add_argument("--q-range", type=_q_range, required=True)
    p.add_argument("--theorem", choices=THEOREMS + ("all",))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, InvalidFanError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, NonTermination) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ShedkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
