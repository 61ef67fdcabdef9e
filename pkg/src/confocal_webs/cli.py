"""Command-line entry point.

    confocal-webs eval --point 1,1
    confocal-webs map --web w3 --coords 0.693147,-0.693147
    confocal-webs invert --web w4 --point 1.4142,1.2247
    confocal-webs verify --suite all --seed 42
    confocal-webs render --web w1 --out w1.svg
    confocal-webs tangency --k1 0.7071 --members 20 --out tangency.svg

Machine-readable JSON goes to stdout.  Domain errors exit 1 with a JSON
object on stderr; usage errors exit 2.  Values that start with a minus
sign must be attached with ``=``, e.g. ``--coords=-1,-0.5``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

from .errors import GeometryError
from .focal import Point, measures
from .verification import CHECKS, reports_to_json, run_suite, verify_tangency_sweep
from .webs import WebCoords, WebId, forward, inverse
from .webviz import PRESETS, render_tangency_figure, render_web_lattice, write_svg


def _floats(count: int):
    def parse(text: str) -> tuple[float, ...]:
        parts = text.split(",")
        if len(parts) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers, got {text!r}")
        try:
            vals = tuple(float(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise argparse.ArgumentTypeError(f"non-finite value in {text!r}")
        return vals

    return parse


def _web(text: str) -> WebId:
    try:
        return WebId.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown web {text!r} (choose w1, w2, w3, w4)") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="confocal-webs", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="focal measures (a, b, f, g, h, e) at a quadrant point")
    p.add_argument("--point", type=_floats(2), required=True, metavar="S,T")

    p = sub.add_parser("map", help="apply a web chart to chart coordinates")
    p.add_argument("--web", type=_web, required=True)
    p.add_argument("--coords", type=_floats(2), required=True, metavar="X,Y")
    p.add_argument("--strict", action="store_true", help="use the quadrant domain for w4")

    p = sub.add_parser("invert", help="chart coordinates of a quadrant point")
    p.add_argument("--web", type=_web, required=True)
    p.add_argument("--point", type=_floats(2), required=True, metavar="S,T")
    p.add_argument("--strict", action="store_true", help="use the quadrant domain for w4")

    p = sub.add_parser("verify", help="run verification checks, print a JSON report array")
    p.add_argument("--web", type=_web)
    p.add_argument("--suite", choices=("all",) + CHECKS, default="all")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int)
    p.add_argument("--pretty", action="store_true", help="also print a summary line per report to stderr")

    p = sub.add_parser("render", help="write the SVG lattice figure of a web")
    p.add_argument("--web", type=_web, required=True)
    p.add_argument("--step", type=float)
    p.add_argument("--shift", type=_floats(2), metavar="TX,TY")
    p.add_argument("--window", type=_floats(4), metavar="X0,X1,Y0,Y1")
    p.add_argument("--viewport", type=_floats(4), metavar="S0,S1,T0,T1")
    p.add_argument("--ppu", type=float, help="pixels per plane unit")
    p.add_argument("--out", required=True, metavar="FILE.svg")

    p = sub.add_parser("tangency", help="tangency sweep report and optional SVG figure")
    p.add_argument("--k1", type=float, required=True)
    p.add_argument("--members", type=int, default=20)
    p.add_argument("--out", metavar="FILE.svg")
    return parser


def _emit(obj) -> None:
    print(json.dumps(obj))


def _run(args) -> int:
    if args.command == "eval":
        _emit(measures(Point(*args.point)).as_dict())
        return 0
    if args.command == "map":
        p = forward(args.web, WebCoords(*args.coords), strict=args.strict)
        _emit({"web": args.web.value, "s": p.s, "t": p.t})
        return 0
    if args.command == "invert":
        c = inverse(args.web, Point(*args.point), strict=args.strict)
        _emit({"web": args.web.value, "x": c.x, "y": c.y})
        return 0
    if args.command == "verify":
        if args.samples is not None and args.samples < 1:
            raise GeometryError("--samples must be positive")
        webs = None if args.web is None else [args.web]
        checks = None if args.suite == "all" else [args.suite]
        reports = run_suite(webs, seed=args.seed, samples=args.samples, checks=checks)
        print(reports_to_json(reports))
        if args.pretty:
            for r in reports:
                mark = "PASS" if r.passed else "FAIL"
                print(f"{mark} {r.check_name} {r.web or '-'} max_error={r.max_error:.3e} tol={r.tolerance:g}", file=sys.stderr)
        return 0 if all(r.passed for r in reports) else 1
    if args.command == "render":
        spec = PRESETS[args.web]
        updates = {
            k: v
            for k, v in (
                ("step", args.step),
                ("shift", args.shift),
                ("window", args.window),
                ("viewport", args.viewport),
                ("ppu", args.ppu),
            )
            if v is not None
        }
        scene = render_web_lattice(replace(spec, **updates))
        write_svg(scene, args.out)
        _emit({"web": args.web.value, "out": args.out, "polylines": len(scene.polylines)})
        return 0
    if args.command == "tangency":
        report = verify_tangency_sweep(args.k1, max(1, args.members))
        out = report.to_dict()
        if args.out:
            write_svg(render_tangency_figure(args.k1, args.members), args.out)
            out["out"] = args.out
        _emit(out)
        return 0 if report.passed else 1
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except GeometryError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
