"""Command-line front end.

Results go to stdout (or ``--out``); diagnostics and the run manifest go
to stderr.  Exit codes: 0 ok, 1 check failed, 2 usage or parse error,
3 evaluation error, 4 unassigned data point, 5 degenerate simplex,
6 fit did not converge.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from pathlib import Path

from . import __version__
from .dirichlet import DirichletParams, make_rng, mc_estimate_j, sample_dirichlet
from .errors import Degenerate, SimplexJError, UnassignedPoint
from .formats import (
    FitDocument,
    FormatError,
    fmt_float,
    format_fit,
    read_data,
    read_simplices,
    read_vertices,
)
from .jderiv import grad_j, hess_j
from .jfun import EvalConfig, EvalStats, eval_j
from .mle import Triangulation, assign_sample, fit, objective
from .oracle import QuadConfig, quad_j

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_EVAL = 3
EXIT_UNASSIGNED = 4
EXIT_DEGENERATE = 5
EXIT_NOT_CONVERGED = 6


def g17(x: float) -> str:
    return "%.17g" % x


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _manifest(args, elapsed: float) -> dict:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    return {
        "command": args.command,
        "params": params,
        "seed": params.get("seed"),
        "version": __version__,
        "elapsed_seconds": round(elapsed, 6),
    }


def _config(args) -> EvalConfig:
    return EvalConfig(epsilon=args.eps) if args.eps is not None else EvalConfig()


def cmd_eval(args, out) -> int:
    stats = EvalStats()
    try:
        value = eval_j(args.y, _config(args), stats=stats)
    except (SimplexJError, OverflowError, ValueError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    print(g17(value), file=out)
    print(f"branch: {stats.top_branch} (cells={stats.cells}, series={stats.series_cells})",
          file=sys.stderr)
    return EXIT_OK


def cmd_grad(args, out) -> int:
    try:
        cfg = _config(args)
        if args.order == 1:
            print(" ".join(g17(v) for v in grad_j(args.y, cfg)), file=out)
        else:
            for row in hess_j(args.y, cfg):
                print(",".join(g17(v) for v in row), file=out)
    except (SimplexJError, OverflowError, ValueError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    return EXIT_OK


def cmd_oracle_check(args, out) -> int:
    if args.trials < 1:
        print("oracle-check: --trials must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if not 1 <= args.d <= 4:
        print("oracle-check: --d must lie in 1..4", file=sys.stderr)
        return EXIT_USAGE
    rng = make_rng(args.seed)
    quad_err, mc_z, mc_rel = [], [], []
    for _ in range(args.trials):
        y = [float(v) for v in rng.uniform(-5.0, 5.0, args.d + 1)]
        mc_seed = int(rng.integers(0, 2**63))
        exact = eval_j(y)
        ref = quad_j(y, QuadConfig())
        quad_err.append(abs(exact - ref) / abs(ref))
        est = mc_estimate_j(y, args.mc_samples, mc_seed)
        mc_rel.append(abs(est.value - exact) / exact)
        mc_z.append(abs(est.value - exact) / est.std_error if est.std_error > 0 else 0.0)
    ok_quad = max(quad_err) <= args.tol
    ok_mc = max(mc_z) <= args.mc_sigma
    print(f"oracle-check d={args.d} trials={args.trials} seed={args.seed}", file=out)
    print(f"{'comparison':<16}{'max':>12}{'median':>12}{'limit':>12}", file=out)
    rows = [
        ("quad_rel_err", quad_err, f"{args.tol:.3g}"),
        ("mc_rel_err", mc_rel, "-"),
        ("mc_zscore", mc_z, f"{args.mc_sigma:.3g}"),
    ]
    for name, vals, limit in rows:
        print(f"{name:<16}{max(vals):>12.3e}{statistics.median(vals):>12.3e}{limit:>12}", file=out)
    print(f"result {'PASS' if ok_quad and ok_mc else 'FAIL'}", file=out)
    return EXIT_OK if ok_quad and ok_mc else EXIT_CHECK


def cmd_sample(args, out) -> int:
    try:
        params = DirichletParams(tuple(float(v) for v in args.a.split(",")))
    except ValueError as exc:
        print(f"sample: bad --a: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.n < 1:
        print("sample: --n must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    for row in sample_dirichlet(params, args.n, args.seed):
        print(",".join(fmt_float(v) for v in row), file=out)
    return EXIT_OK


def cmd_mc_check(args, out) -> int:
    if args.n < 2:
        print("mc-check: --n must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        exact = eval_j(args.y)
        est = mc_estimate_j(args.y, args.n, args.seed)
    except (SimplexJError, OverflowError, ValueError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    z = abs(est.value - exact) / est.std_error if est.std_error > 0 else 0.0
    print(f"mc_value {g17(est.value)}", file=out)
    print(f"std_error {g17(est.std_error)}", file=out)
    print(f"eval_j {g17(exact)}", file=out)
    print(f"zscore {z:.6f}", file=out)
    return EXIT_OK if z <= args.sigma else EXIT_CHECK


def cmd_fit(args, out) -> int:
    try:
        verts = read_vertices(args.vertices)
        simplices = read_simplices(args.simplices)
        points, weights = read_data(args.data, verts.shape[1])
    except (FormatError, OSError) as exc:
        print(f"fit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        tri = Triangulation(verts, simplices)
    except Degenerate as exc:
        print(f"fit: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"fit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        sample = assign_sample(tri, points, weights)
    except UnassignedPoint as exc:
        print(f"fit: {exc}", file=sys.stderr)
        return EXIT_UNASSIGNED
    except ValueError as exc:
        print(f"fit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    res = fit(tri, sample, tol=args.tol, max_iter=args.max_iter)
    doc = FitDocument(
        vertex_values=[float(v) for v in res.psi],
        loglik=res.loglik,
        objective=objective(tri, sample, res.psi),
        mass=res.mass,
        grad_norm=res.grad_norm,
        iterations=res.iterations,
        converged=res.converged,
        manifest={
            "command": "fit",
            "version": __version__,
            "seed": "none",
            "vertices": str(args.vertices),
            "simplices": str(args.simplices),
            "data": str(args.data),
            "tol": fmt_float(args.tol),
            "max_iter": str(args.max_iter),
        },
    )
    Path(args.out).write_text(format_fit(doc), encoding="utf-8")
    print(f"mass {fmt_float(res.mass)} converged {res.converged}", file=sys.stderr)
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simplexj", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate J(y0, ..., yd)")
    p.add_argument("y", type=float, nargs="+")
    p.add_argument("--eps", type=float, default=None, help="series threshold on the spread")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grad", help="gradient (order 1) or Hessian (order 2) of J")
    p.add_argument("y", type=float, nargs="+")
    p.add_argument("--order", type=int, choices=(1, 2), default=1)
    p.add_argument("--eps", type=float, default=None)
    p.set_defaults(func=cmd_grad)

    p = sub.add_parser("oracle-check", help="compare eval_j with quadrature and Monte Carlo")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--mc-samples", type=int, default=10000)
    p.add_argument("--mc-sigma", type=float, default=5.0)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("sample", help="draw Dirichlet vectors")
    p.add_argument("--a", required=True, help="comma-separated parameters, e.g. 1,1,1")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("mc-check", help="Monte-Carlo estimate of J against eval_j")
    p.add_argument("y", type=float, nargs="+")
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--sigma", type=float, default=4.0)
    p.set_defaults(func=cmd_mc_check)

    p = sub.add_parser("fit", help="fit the maximum-likelihood log-linear density")
    p.add_argument("--vertices", required=True)
    p.add_argument("--simplices", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=10000)
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout if out is None else out
    started = time.perf_counter()
    code = args.func(args, out)
    manifest = _manifest(args, time.perf_counter() - started)
    print("manifest: " + json.dumps(manifest, sort_keys=True), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
