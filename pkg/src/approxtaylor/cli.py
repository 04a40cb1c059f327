"""Command-line front end.

Exit status: 0 on success, 1 on numerical failure, 2 on usage errors.
"""
import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .convergence import convergence_study, steps_for
from .errors import DomainError, IntegrationError
from .integrator import integrate
from .problems import PROBLEMS, ProblemSpec, make_problem
from .stability import real_stability_interval, region_scan, write_boundary_csv, write_raster_csv
from .stencil import check_moments, derive_stencil
from .tableau import build_tableau, structural_report

MAX_ORDER_TABLEAU = 12
MAX_RESOLUTION = 4096


def _fmt(x):
    return format(float(x), ".17g")


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0 or not np.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _add_problem_args(p):
    p.add_argument("--problem", required=True, choices=sorted(PROBLEMS))
    p.add_argument("--order", "-R", type=_positive_int, required=True)
    p.add_argument("--h", type=_positive_float, required=True)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--u0", help="comma-separated initial state")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="problem parameter, e.g. lam=2 or A='-1,2;-2,-1'")
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser():
    parser = argparse.ArgumentParser(prog="approxtaylor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="integrate a library problem with fixed steps")
    _add_problem_args(p)

    p = sub.add_parser("convergence", help="observed order over halving step sizes")
    _add_problem_args(p)
    p.add_argument("--levels", type=int, default=5)

    p = sub.add_parser("tableau", help="Butcher tableau with exact structural checks")
    p.add_argument("--order", "-R", type=int, required=True)
    p.add_argument("--out", type=Path, help="write the JSON document here")
    p.add_argument("--format", choices=["json", "text"], default="json",
                   help="what to print on stdout")

    p = sub.add_parser("stability", help="stability region raster and boundary")
    p.add_argument("--order", "-R", type=_positive_int, required=True)
    p.add_argument("--re", type=float, nargs=2, default=[-4.0, 2.0], metavar=("LO", "HI"))
    p.add_argument("--im", type=float, nargs=2, default=[-4.0, 4.0], metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int, default=201, help="samples per axis")
    p.add_argument("--ny", type=int, help="samples along the imaginary axis (default: --resolution)")
    p.add_argument("--out", type=Path, default=Path("."),
                   help="directory for raster.csv and boundary.csv")

    p = sub.add_parser("stencil", help="print a centered finite-difference stencil")
    p.add_argument("-p", type=int, required=True, help="derivative order")
    p.add_argument("-q", type=int, required=True, help="half accuracy order")
    return parser


def _spec_from_args(parser, args):
    u0 = None
    if args.u0:
        try:
            u0 = tuple(float(x) for x in args.u0.split(","))
        except ValueError:
            parser.error(f"bad --u0 {args.u0!r}")
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            parser.error(f"--param expects KEY=VALUE, got {item!r}")
        params[key] = value
    spec = ProblemSpec(args.problem, u0=u0, params=params)
    try:
        return spec, make_problem(spec)
    except (KeyError, ValueError) as exc:
        parser.error(str(exc))


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _trajectory_text(trajectory, fmt):
    if fmt == "json":
        rows = [{"t": float(t), "u": [float(x) for x in u]} for t, u in trajectory]
        return json.dumps(rows) + "\n"
    m = len(trajectory[0][1])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"u_{k + 1}" for k in range(m)])
    for t, u in trajectory:
        w.writerow([_fmt(t)] + [_fmt(x) for x in u])
    return buf.getvalue()


def run_integrate(parser, args):
    _, problem = _spec_from_args(parser, args)
    try:
        n = steps_for(args.t_end, args.h)
    except DomainError as exc:
        parser.error(str(exc))
    try:
        trajectory = integrate(problem, args.h, n, args.order)
    except IntegrationError as exc:
        _emit(_trajectory_text(exc.trajectory, args.format), args.out)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(_trajectory_text(trajectory, args.format), args.out)
    return 0


def run_convergence(parser, args):
    _, problem = _spec_from_args(parser, args)
    if problem.exact is None:
        parser.error(f"problem {args.problem!r} has no exact solution")
    if args.levels < 2:
        parser.error("--levels must be >= 2")
    try:
        report = convergence_study(problem, args.order, args.h, args.levels, args.t_end, name=args.problem)
    except DomainError as exc:
        parser.error(str(exc))
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = report.to_json() if args.format == "json" else report.to_csv()
    sys.stdout.write(text)
    if args.out is not None:
        # both renderings side by side
        args.out.with_suffix(".csv").write_text(report.to_csv())
        args.out.with_suffix(".json").write_text(report.to_json())
    return 0


def _report_text(report):
    d = report.to_dict()
    return "\n".join(f"{k}: {v}" for k, v in d.items()) + "\n"


def run_tableau(parser, args):
    if not 1 <= args.order <= MAX_ORDER_TABLEAU:
        parser.error(f"--order must be in 1..{MAX_ORDER_TABLEAU}")
    tab = build_tableau(args.order)
    report = structural_report(tab)
    doc = json.dumps(tab.to_dict(report), indent=1) + "\n"
    if args.out is not None:
        args.out.write_text(doc)
    if args.format == "json":
        sys.stdout.write(doc)
    else:
        sys.stdout.write(tab.render() + "\n\n" + _report_text(report))
    return 0


def run_stability(parser, args):
    nx = args.resolution
    ny = args.ny if args.ny is not None else nx
    if not (2 <= nx <= MAX_RESOLUTION and 2 <= ny <= MAX_RESOLUTION):
        parser.error(f"resolution must be in 2..{MAX_RESOLUTION} per axis")
    try:
        grid = region_scan(args.order, tuple(args.re), tuple(args.im), nx, ny)
    except DomainError as exc:
        parser.error(str(exc))
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "raster.csv", "w", newline="") as fh:
        write_raster_csv(grid, fh)
    with open(args.out / "boundary.csv", "w", newline="") as fh:
        write_boundary_csv(grid, fh)
    print(f"real stability interval endpoint: {real_stability_interval(args.order):.8f}")
    return 0


def run_stencil(parser, args):
    try:
        st = derive_stencil(args.p, args.q)
    except DomainError as exc:
        parser.error(str(exc))
    if not check_moments(st):
        print("error: moment conditions violated", file=sys.stderr)
        return 1
    print(st.format())
    return 0


COMMANDS = {
    "integrate": run_integrate,
    "convergence": run_convergence,
    "tableau": run_tableau,
    "stability": run_stability,
    "stencil": run_stencil,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](parser, args)


if __name__ == "__main__":
    sys.exit(main())
