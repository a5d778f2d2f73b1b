"""Command-line interface.

Subcommands:

* ``solve``        one (method, delta, seed) cell, printed as a report row
* ``sweep``        run a JSON sweep config, emit the CSV report
* ``diff``         stable-differentiation demo over a noise-level grid
* ``laplace-demo`` closed-form Hadamard instability table
* ``selftest``     fast invariant checks with one PASS/FAIL line each
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from .dsm import EpsilonSchedule, dsm_evolve, dsm_stop_root
from .errors import IllposedError
from .harness import (
    MethodSpec,
    SweepConfig,
    format_report,
    parse_alpha_rule,
    parse_dsm_stop,
    parse_landweber_stop,
    parse_schedule,
    run_cell,
    run_sweep,
    write_report,
)
from .landweber import FixedStop, landweber_run
from .linops import (
    DiscreteOperator,
    Grid,
    build_fredholm_operator,
    resolvent_solve,
    spectral,
)
from .problems import (
    PROBLEM_KINDS,
    TRUTH_FUNCTIONS,
    NoisyData,
    add_noise,
    hadamard_instability_table,
    make_problem,
    stable_differentiate,
)
from .quasisol import BallCompactum, quasi_solution
from .variational import morozov_alpha, tikhonov_solve

__all__ = ["main"]

_FMT = "{:.12g}".format


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="illposed",
        description="Regularization methods for linear ill-posed problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one method on one noisy instance")
    solve.add_argument("--method", required=True,
                       choices=("tikhonov", "quasi", "landweber", "dsm"))
    solve.add_argument("--problem", default="fredholm", choices=PROBLEM_KINDS)
    solve.add_argument("--n", type=int, default=64)
    solve.add_argument("--truth", default="hat", choices=tuple(TRUTH_FUNCTIONS))
    solve.add_argument("--delta", type=float, default=1e-2)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--rule", default="apriori",
                       help="tikhonov: apriori[:p] | morozov[:C] | fixed:alpha")
    solve.add_argument("--radius", type=float, default=1.0, help="quasi: ball radius")
    solve.add_argument("--mu", type=float, default=0.9, help="landweber: step size")
    solve.add_argument("--nmax", type=int, default=100_000,
                       help="landweber: iteration budget")
    solve.add_argument("--stop", default=None,
                       help="landweber: discrepancy[:C] | oracle | fixed:n; "
                            "dsm: root[:b] | discrepancy[:C] | time:t")
    solve.add_argument("--schedule", default="c0=1,c1=1,p=0.5",
                       help="dsm: epsilon schedule parameters")
    solve.add_argument("--trace", default=None, metavar="PATH",
                       help="write the landweber/dsm trace as CSV")

    sweep = sub.add_parser("sweep", help="run a sweep config and write the report")
    sweep.add_argument("--config", required=True, help="JSON sweep config path")
    sweep.add_argument("--out", default=None, help="report CSV path (overrides config)")
    sweep.add_argument("--seed", type=int, default=None,
                       help="replace the config's seed list with this one seed")

    diff = sub.add_parser("diff", help="stable differentiation demo, f = sin")
    diff.add_argument("--deltas", default="1e-2,1e-3,1e-4,1e-5",
                      help="comma-separated noise levels")
    diff.add_argument("--bound-m", type=float, default=1.0, dest="bound_m",
                      help="second-derivative bound M")
    diff.add_argument("--points", type=int, default=200,
                      help="number of interior evaluation points")

    laplace = sub.add_parser("laplace-demo", help="Hadamard instability table")
    laplace.add_argument("--nmax", type=int, default=12)
    laplace.add_argument("--y", type=float, default=1.0, dest="y_eval")
    laplace.add_argument("--out", default=None, help="CSV path (default: stdout)")

    sub.add_parser("selftest", help="run fast invariant checks")
    return parser


def _solve_method_spec(args) -> MethodSpec:
    if args.method == "tikhonov":
        return MethodSpec(name="tikhonov", rule=parse_alpha_rule(args.rule))
    if args.method == "quasi":
        return MethodSpec(name="quasi", radius=args.radius)
    if args.method == "landweber":
        stop = parse_landweber_stop(args.stop or "discrepancy:1.5")
        return MethodSpec(name="landweber", mu=args.mu, n_max=args.nmax, stop=stop)
    return MethodSpec(
        name="dsm",
        schedule=parse_schedule(args.schedule),
        stop=parse_dsm_stop(args.stop or "root:0.5"),
    )


def _write_trace(path: str, method: str, artifacts: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        if method == "landweber":
            writer.writerow(("n", "residual", "error"))
            trace = artifacts.get("trace")
            if trace is not None:
                errors = trace.errors
                for k, residual in enumerate(trace.residuals):
                    err = errors[k] if errors is not None else -1.0
                    writer.writerow((k, _FMT(residual), _FMT(err)))
        else:
            writer.writerow(("t", "epsilon", "residual", "error"))
            trajectory = artifacts.get("trajectory")
            if trajectory is not None:
                for k, t in enumerate(trajectory.times):
                    residual = (
                        trajectory.residuals[k]
                        if trajectory.residuals is not None
                        else -1.0
                    )
                    err = (
                        trajectory.errors[k] if trajectory.errors is not None else -1.0
                    )
                    writer.writerow(
                        (_FMT(t), _FMT(trajectory.epsilons[k]), _FMT(residual), _FMT(err))
                    )


def _cmd_solve(args) -> int:
    if args.trace is not None and args.method not in ("landweber", "dsm"):
        print("--trace requires --method landweber or dsm", file=sys.stderr)
        return 2
    problem = make_problem(args.problem, args.n, TRUTH_FUNCTIONS[args.truth])
    spec = _solve_method_spec(args)
    artifacts: dict = {}
    row = run_cell(problem, spec, args.delta, args.seed, artifacts=artifacts)
    sys.stdout.write(format_report([row]))
    if args.trace is not None:
        _write_trace(args.trace, args.method, artifacts)
    return 0


def _cmd_sweep(args) -> int:
    config = SweepConfig.load(args.config)
    if args.seed is not None:
        config = config.with_seeds([args.seed])
    rows = run_sweep(config)
    out = args.out or config.out
    if out is None:
        sys.stdout.write(format_report(rows))
    else:
        write_report(rows, out)
        print(f"wrote {len(rows)} rows to {out}")
    return 0


def _adversarial_sin_samples(delta: float, h: float):
    """Noisy sin with the worst-case sign pattern for the central difference."""

    def f_delta(x: float) -> float:
        phase = math.sin(math.pi * x / (2.0 * h))
        sign = 1.0 if phase >= 0.0 else -1.0
        return math.sin(x) + delta * sign

    return f_delta


def _cmd_diff(args) -> int:
    try:
        deltas = [float(d) for d in args.deltas.split(",") if d.strip()]
    except ValueError:
        print(f"cannot parse --deltas {args.deltas!r}", file=sys.stderr)
        return 2
    bound_m = args.bound_m
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(("delta", "h", "max_error", "bound", "error_over_sqrt_delta"))
    for delta in deltas:
        h = math.sqrt(2.0 * delta / bound_m)
        pts = np.linspace(h, 1.0 - h, args.points)
        derivative = stable_differentiate(
            _adversarial_sin_samples(delta, h), delta, bound_m, pts
        )
        max_error = float(np.max(np.abs(derivative - np.cos(pts))))
        bound = math.sqrt(2.0 * bound_m * delta)
        writer.writerow(
            (_FMT(delta), _FMT(h), _FMT(max_error), _FMT(bound),
             _FMT(max_error / math.sqrt(delta)))
        )
    return 0


def _cmd_laplace(args) -> int:
    rows = hadamard_instability_table(args.nmax, args.y_eval)
    target = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(target, lineterminator="\n")
        writer.writerow(
            ("n", "sup_phi", "sup_dphi", "max_u",
             "sup_phi_alt", "sup_dphi_alt", "max_u_alt")
        )
        for row in rows:
            writer.writerow(
                (row.n, _FMT(row.sup_phi), _FMT(row.sup_dphi), _FMT(row.max_u),
                 _FMT(row.sup_phi_alt), _FMT(row.sup_dphi_alt), _FMT(row.max_u_alt))
            )
    finally:
        if args.out:
            target.close()
    return 0


def _scalar_operator(a: float) -> DiscreteOperator:
    return DiscreteOperator(Grid(1), [[a]])


def _selftest_checks():
    rng = np.random.default_rng(0)

    def adjoint_identity():
        op = build_fredholm_operator(None, 16)
        u = rng.standard_normal(16)
        v = rng.standard_normal(16)
        gap = abs(op.inner_h(op.apply(u), v) - op.inner_h(u, op.apply_adjoint(v)))
        assert gap <= 1e-12 * op.norm_h(u) * op.norm_h(v), gap

    def resolvent_bound():
        op = build_fredholm_operator(None, 16)
        for alpha in (1e-3, 1e-1, 1.0):
            rhs = rng.standard_normal(16)
            u = resolvent_solve(op, alpha, rhs)
            assert op.norm_h(u) <= op.norm_h(rhs) / alpha * (1 + 1e-12)

    def smoothing_bound():
        data = spectral(build_fredholm_operator(None, 32))
        for eps in np.logspace(-6, 0, 7):
            lhs = float(np.max(data.s / (data.s**2 + eps)))
            assert lhs <= 1.0 / (2.0 * math.sqrt(eps)) * (1 + 1e-12), (eps, lhs)

    def noise_level_exact():
        problem = make_problem("fredholm", 32, TRUTH_FUNCTIONS["hat"])
        noisy = add_noise(problem, 1e-2, seed=7)
        achieved = problem.op.norm_h(noisy.f_delta - problem.data)
        assert abs(achieved - 1e-2) <= 1e-12 * 1e-2, achieved

    def tikhonov_filter_equivalence():
        op = build_fredholm_operator(None, 16)
        f_delta = rng.standard_normal(16)
        alpha = 1e-3
        u = tikhonov_solve(op, f_delta, alpha)
        mat_u, sigma, mat_vt = np.linalg.svd(op.matrix)
        coeff = math.sqrt(op.h) * (mat_u.T @ f_delta)
        oracle = (mat_vt.T / math.sqrt(op.h)) @ (sigma / (sigma**2 + alpha) * coeff)
        assert op.norm_h(u - oracle) <= 1e-10 * op.norm_h(oracle)

    def morozov_scalar():
        op = _scalar_operator(1.0)
        alpha, residual = morozov_alpha(op, [1.0], 0.1, 2.0)
        assert abs(alpha - 0.25) <= 1e-10, alpha
        assert abs(residual - 0.2) <= 1e-10, residual

    def quasi_scalar_kkt():
        op = _scalar_operator(1.0)
        ball = BallCompactum(radius=1.0, grid=op.grid)
        u, lam = quasi_solution(op, [2.0], ball)
        assert abs(u[0] - 1.0) <= 1e-10 and abs(lam - 1.0) <= 1e-10, (u, lam)

    def landweber_scalar():
        op = _scalar_operator(1.0)
        noisy = NoisyData(
            f_delta=np.array([1.0]), delta=0.0, seed=0, q_delta=np.array([1.0])
        )
        u, trace = landweber_run(op, noisy, mu=0.5, stop=FixedStop(10))
        assert abs(u[0] - (1.0 - 0.5**10)) <= 1e-12, u

    def dsm_scalar():
        op = _scalar_operator(1.0)
        trajectory = dsm_evolve(op, [1.0], lambda t: 0.0, 1.0)
        assert abs(trajectory.final[0] - (1.0 - math.exp(-1.0))) <= 1e-12

    def dsm_stop_root_closed_form():
        t, at_boundary = dsm_stop_root(EpsilonSchedule(1.0, 1.0, 0.5), 0.01, 0.5)
        assert not at_boundary and abs(t - 159999.0) <= 1e-6 * 159999.0, t

    return [
        ("adjoint-identity", adjoint_identity),
        ("resolvent-bound", resolvent_bound),
        ("smoothing-bound", smoothing_bound),
        ("noise-level-exact", noise_level_exact),
        ("tikhonov-filter-equivalence", tikhonov_filter_equivalence),
        ("morozov-scalar", morozov_scalar),
        ("quasi-scalar-kkt", quasi_scalar_kkt),
        ("landweber-scalar", landweber_scalar),
        ("dsm-scalar", dsm_scalar),
        ("dsm-stop-root-closed-form", dsm_stop_root_closed_form),
    ]


def _cmd_selftest(_args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            check()
        except Exception as exc:  # report and keep going
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"PASS {name}")
    print(f"{10 - failures}/10 checks passed")
    return 1 if failures else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "sweep": _cmd_sweep,
        "diff": _cmd_diff,
        "laplace-demo": _cmd_laplace,
        "selftest": _cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except IllposedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
