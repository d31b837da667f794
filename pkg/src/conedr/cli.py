"""``conedr`` command line: example, certify, trace, sweep, render.

Exit codes: 0 success, 1 usage or parse error, 2 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circle import certify
from .cones import ConeExpressionError, PlanarCone, make_cone, project
from .counterexamples import ExampleCheckError, run_example
from .operators import DR, FIX_TOL, ConePair, OperatorParams, apply, iterate
from .structure import ConsistencyError, fixed_set_dr, structure_report
from .svg import render_svg
from .traceio import TraceFormatError, parse_trace, rows_to_csv, rows_to_json, trace_rows

EXIT_OK, EXIT_USAGE, EXIT_CONSISTENCY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument parsing helpers

def _cone(expr: str) -> PlanarCone:
    try:
        return make_cone(expr)
    except ConeExpressionError as e:
        raise UsageError(f"invalid cone expression {expr!r}: {e} (offending token: {e.token!r})") from None


def _float(token: str, what: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise UsageError(f"{what}: cannot parse {token!r} as a number") from None
    if not math.isfinite(v):
        raise UsageError(f"{what}: {token!r} is not finite")
    return v


def _start(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--start must look like 'x,y', got {text!r}")
    return np.array([_float(p.strip(), "--start") for p in parts])


def _params(lam: float, mu: float, kappa: float) -> OperatorParams:
    try:
        return OperatorParams(lam, mu, kappa)
    except ValueError as e:
        raise UsageError(f"invalid parameters: {e}") from None


def _grid_axis(text: str, name: str) -> list[float]:
    """Comma list of values, or ``lo:hi:n`` for n evenly spaced values."""
    text = text.strip()
    if not text:
        return []
    out: list[float] = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok.count(":") == 2:
            lo, hi, n = tok.split(":")
            try:
                count = int(n)
            except ValueError:
                raise UsageError(f"--{name}: bad point count in {tok!r}") from None
            out.extend(np.linspace(_float(lo, f"--{name}"), _float(hi, f"--{name}"), count).tolist())
        else:
            out.append(_float(tok, f"--{name}"))
    return out


def _pair(args) -> ConePair:
    return ConePair(_cone(args.cone_a), _cone(args.cone_b))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_example(args) -> int:
    params = None
    given = (args.lam, args.mu, args.kappa)
    if any(v is not None for v in given):
        if any(v is None for v in given):
            raise UsageError("--lambda, --mu and --kappa must be given together")
        params = _params(*given)
    start = _start(args.start) if args.start else None
    try:
        report = run_example(args.id, args.steps, params, start)
    except ValueError as e:
        raise UsageError(str(e)) from None
    d = report.to_dict()
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "x", "y"])
        for k, (x, y) in enumerate(d["points"]):
            w.writerow([k, repr(x), repr(y)])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(json.dumps(d, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    pair = _pair(args)
    structure_report(pair)  # raises ConsistencyError on a broken identity
    cert = certify(pair)
    _emit(json.dumps(cert.to_dict(), indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_trace(args) -> int:
    pair = _pair(args)
    params = _params(args.lam, args.mu, args.kappa)
    x0 = _start(args.start)
    if args.max_iters < 1:
        raise UsageError("--max-iters must be at least 1")
    traj = iterate(pair, params, x0, args.max_iters, args.fix_tol)
    fixed_set = fixed_set_dr(pair) if params.is_dr else None
    rows = trace_rows(traj, pair, params, fixed_set, args.fix_tol)
    _emit(rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows) + "\n", args.out)
    return EXIT_OK


class Verdict(Enum):
    FINITE = "FiniteWithinBudget"
    NOT_FINITE = "NotFiniteWithinBudget"


@dataclass(frozen=True)
class SweepResult:
    lam: float
    mu: float
    kappa: float
    verdict: Verdict
    steps_used: int
    final_distance_to_fix: float

    def row(self) -> list[str]:
        return [repr(self.lam), repr(self.mu), repr(self.kappa), self.verdict.value,
                str(self.steps_used), repr(self.final_distance_to_fix)]


SWEEP_COLUMNS = ("lambda", "mu", "kappa", "verdict", "steps_used", "final_distance_to_fix")


def sweep_point(pair: ConePair, params: OperatorParams, x0: np.ndarray, budget: int,
                fix_tol: float, fixed_set: PlanarCone | None) -> SweepResult:
    """Run at most ``budget`` steps; ``steps_used`` counts applications until fixed."""
    x = x0
    steps = 0
    while True:
        tx = apply(pair, params, x)
        residual = math.hypot(float(tx[0] - x[0]), float(tx[1] - x[1]))
        fixed = residual <= fix_tol * math.hypot(float(x[0]), float(x[1]))
        if fixed or steps == budget:
            break
        x = tx
        steps += 1
    if params.is_dr:
        p = project(fixed_set, x)
        dist = math.hypot(float(x[0] - p[0]), float(x[1] - p[1]))
    else:
        dist = residual
    return SweepResult(params.lam, params.mu, params.kappa,
                       Verdict.FINITE if fixed else Verdict.NOT_FINITE, steps, dist)


def _sweep_task(task):
    return sweep_point(*task)


def run_sweep(pair: ConePair, lams, mus, kappas, x0, budget: int | None,
              fix_tol: float = FIX_TOL, jobs: int = 1) -> list[SweepResult]:
    grid = [(lam, mu, kappa) for lam in lams for mu in mus for kappa in kappas]
    params = [_params(*g) for g in grid]
    fixed_set = fixed_set_dr(pair)
    dr_budget = None
    tasks = []
    for p in params:
        b = budget
        if b is None:
            b = 1000
            if p.is_dr:
                if dr_budget is None:
                    cert = certify(pair)
                    dr_budget = max(1000, 2 * cert.bound_n) if cert.finite else 1000
                b = dr_budget
        tasks.append((pair, p, x0, b, fix_tol, fixed_set))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_sweep_task, tasks, chunksize=16))
    return [_sweep_task(t) for t in tasks]


def cmd_sweep(args) -> int:
    pair = _pair(args)
    x0 = _start(args.start)
    if args.budget is not None and args.budget < 0:
        raise UsageError("--budget must be nonnegative")
    results = run_sweep(pair, _grid_axis(args.lam, "lambda"), _grid_axis(args.mu, "mu"),
                        _grid_axis(args.kappa, "kappa"), x0, args.budget, args.fix_tol, args.jobs)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in results:
        w.writerow(r.row())
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        with open(args.trace, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read trace {args.trace!r}: {e.strerror}") from None
    try:
        pts = parse_trace(text)
    except TraceFormatError as e:
        raise UsageError(f"malformed trace {args.trace!r}: {e}") from None
    cones = [("A", _cone(args.cone_a)), ("B", _cone(args.cone_b))]
    if args.show_fix:
        cones.append(("Fix", fixed_set_dr(ConePair(cones[0][1], cones[1][1]))))
    _emit(render_svg(pts, cones), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conedr", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cones(sp):
        sp.add_argument("--cone-a", required=True, help="first cone, e.g. sector:0,0.75pi")
        sp.add_argument("--cone-b", required=True, help="second cone, e.g. halfplane:0.5pi")

    def out(sp):
        sp.add_argument("--out", help="write to this path instead of stdout")

    def fix_tol(sp):
        sp.add_argument("--fix-tol", type=float, default=FIX_TOL,
                        help="relative fixed-point tolerance (0 for exact equality)")

    ex = sub.add_parser("example", help="reproduce one of the six non-convergent examples")
    ex.add_argument("id", type=int, choices=range(1, 7))
    ex.add_argument("--steps", type=int, default=50)
    ex.add_argument("--lambda", dest="lam", type=float)
    ex.add_argument("--mu", type=float)
    ex.add_argument("--kappa", type=float)
    ex.add_argument("--start")
    ex.add_argument("--format", choices=("json", "csv"), default="json")
    out(ex)
    ex.set_defaults(func=cmd_example)

    ce = sub.add_parser("certify", help="DR finite-convergence certificate as JSON")
    cones(ce)
    out(ce)
    ce.set_defaults(func=cmd_certify)

    tr = sub.add_parser("trace", help="dump a trajectory")
    cones(tr)
    tr.add_argument("--lambda", dest="lam", type=float, default=DR.lam)
    tr.add_argument("--mu", type=float, default=DR.mu)
    tr.add_argument("--kappa", type=float, default=DR.kappa)
    tr.add_argument("--start", required=True, help='start point "x,y"')
    tr.add_argument("--max-iters", type=int, default=100)
    tr.add_argument("--format", choices=("csv", "json"), default="csv")
    fix_tol(tr)
    out(tr)
    tr.set_defaults(func=cmd_trace)

    sw = sub.add_parser("sweep", help="finite-convergence verdicts over a parameter grid")
    cones(sw)
    sw.add_argument("--lambda", dest="lam", default="2", help="comma list or lo:hi:n")
    sw.add_argument("--mu", default="2")
    sw.add_argument("--kappa", default="0.5")
    sw.add_argument("--start", required=True)
    sw.add_argument("--budget", type=int, help="steps per grid point")
    sw.add_argument("--jobs", type=int, default=1, help="worker processes")
    fix_tol(sw)
    out(sw)
    sw.set_defaults(func=cmd_sweep)

    re_ = sub.add_parser("render", help="SVG of a trace over its cones")
    re_.add_argument("--trace", required=True, help="CSV or JSON file written by trace")
    cones(re_)
    re_.add_argument("--show-fix", action="store_true", help="also draw the DR fixed set")
    re_.add_argument("--out", required=True)
    re_.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"conedr {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConsistencyError, ExampleCheckError) as e:
        print(f"conedr {args.command}: internal consistency failure: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
