"""Command-line interface.

Subcommands
-----------
boundary        theoretical curve gamma -> h along a signal-split ray
phase-diagram   empirical MLE-existence probabilities on a (kappa, gamma) grid
separable       LP separation test for a CSV dataset
qn              Monte Carlo trials of the empirical boundary statistic
statdim         statistical dimension of a cone C(W)
check           kinematic-formula existence prediction for given (n, p)

Exit codes: 0 success; 1 bad flags or unreadable input; 2 partial solver
failure (flagged rows/cells in the output); 3 dataset separated (the
``separable`` command only, so shell pipelines can branch on it).

Flag values take precedence over a ``--config`` JSON file, which takes
precedence over built-in defaults.  Output files are written to a
temporary name and atomically renamed, so a failed run never leaves a
partial file behind.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile

import numpy as np

from .boundary import boundary_curve
from .conegeom import estimate_qn, kinematic_predict, statistical_dimension
from .phasesim import (
    GridSpec,
    diagram_to_csv,
    diagram_to_json,
    diagram_to_svg,
    run_phase_diagram,
)
from .probability import ModelParams, gauss_hermite_rule, sample_yv, sigmoid
from .rng import RngSeed
from .separability import check_separation, load_dataset_csv

PAPER_SCALE_N = 4000
PAPER_SCALE_REPLICATES = 50


class UsageError(Exception):
    pass


def write_text_atomic(path: str, text: str):
    """Write via a temp file in the same directory plus atomic rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mle-phase-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, output: str | None):
    if output:
        write_text_atomic(output, text)
    else:
        sys.stdout.write(text)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"missing required flag --{name.replace('_', '-')}")


def cmd_boundary(args) -> int:
    _require(args, "rho")
    if not 0.0 <= args.rho <= 1.0:
        raise UsageError(f"--rho must be in [0, 1], got {args.rho}")
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if args.gamma_max < 0:
        raise UsageError("--gamma-max must be >= 0")
    if args.prob_axis and args.rho != 1.0:
        raise UsageError("--prob-axis requires --rho 1 (the intercept-only model)")
    gammas = np.linspace(0.0, args.gamma_max, args.steps)
    kept = gammas[gammas <= args.gamma_cap]
    if kept.size < gammas.size:
        print(
            f"note: dropping {gammas.size - kept.size} grid points with gamma > "
            f"{args.gamma_cap} (h decays toward 0 there; raise --gamma-cap to keep them)",
            file=sys.stderr,
        )
    if kept.size == 0:
        raise UsageError("no grid points at or below --gamma-cap")
    rule = gauss_hermite_rule(args.order) if args.order else None
    points = boundary_curve(args.rho, kept, rule=rule, tol=args.tol)
    lines = []
    header = "gamma,h,t0,t1,converged"
    if args.prob_axis:
        header = "p_y1," + header
    lines.append(header)
    failures = 0
    for pt in points:
        sol = pt.solution
        row = (
            f"{pt.gamma:.10g},{pt.h:.10g},{sol.t_star[0]:.10g},{sol.t_star[1]:.10g},"
            f"{str(sol.converged).lower()}"
        )
        if args.prob_axis:
            row = f"{sigmoid(pt.gamma):.10g}," + row
        lines.append(row)
        failures += int(not sol.converged)
    emit("\n".join(lines) + "\n", args.output)
    return 2 if failures else 0


def cmd_phase_diagram(args) -> int:
    n = PAPER_SCALE_N if args.paper_scale else args.n
    replicates = PAPER_SCALE_REPLICATES if args.paper_scale else args.replicates
    _require(args, "rho")
    spec = GridSpec(
        n=n,
        kappa_grid=np.linspace(args.kappa_min, args.kappa_max, args.kappa_steps),
        gamma_grid=np.linspace(args.gamma_min, args.gamma_max, args.gamma_steps),
        rho=args.rho,
        replicates=replicates,
        fit_intercept=not args.no_intercept,
        base_seed=RngSeed(args.seed, args.stream),
    )
    diagram = run_phase_diagram(spec, workers=args.workers)
    if args.format == "csv":
        text = diagram_to_csv(diagram)
    elif args.format == "json":
        text = diagram_to_json(diagram)
    else:
        text = diagram_to_svg(diagram)
    emit(text, args.output)
    failed = sum(cell.failures for cell in diagram.cells.values())
    return 2 if failed else 0


def cmd_separable(args) -> int:
    try:
        data = load_dataset_csv(args.dataset)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    verdict = check_separation(data, fit_intercept=not args.no_intercept, tol=args.tol)
    doc = {
        "n": data.n,
        "p": data.p,
        "fit_intercept": verdict.fit_intercept,
        "separated": verdict.separated,
        "mle_exists": verdict.mle_exists,
        "lp_objective": verdict.lp_objective,
        "solver_status": verdict.solver_status.value,
        "degenerate_labels": verdict.degenerate_labels,
        "witness": None
        if verdict.witness is None
        else {"b0": verdict.witness[0], "b": verdict.witness[1].tolist()},
    }
    emit(json.dumps(doc, indent=2) + "\n", args.output)
    return 3 if verdict.separated else 0


def cmd_qn(args) -> int:
    params = ModelParams(args.beta0, args.gamma0)
    est = estimate_qn(params, args.n, args.trials, RngSeed(args.seed, args.stream), tol=args.tol)
    doc = {
        "beta0": params.beta0,
        "gamma0": params.gamma0,
        "n": est.n,
        "trials": est.trials,
        "mean": est.mean,
        "stderr": est.stderr,
        "diverged_count": est.diverged_count,
        "values": list(est.values),
    }
    emit(json.dumps(doc, indent=2) + "\n", args.output)
    return 0


def cmd_statdim(args) -> int:
    seed = RngSeed(args.seed, args.stream)
    if args.basis == "orthant":
        basis = np.empty((args.n, 0))
    elif args.basis == "ones":
        basis = np.ones((args.n, 1))
    else:
        y, v = sample_yv(ModelParams(args.beta0, args.gamma0), seed.substream(1), args.n)
        basis = np.column_stack([y, v])
    est = statistical_dimension(basis, args.trials, seed)
    doc = {
        "n": est.n,
        "basis": args.basis,
        "dim_w": est.dim_w,
        "trials": est.trials,
        "delta_hat": est.delta_hat,
        "stderr": est.stderr,
    }
    emit(json.dumps(doc, indent=2) + "\n", args.output)
    return 0


def cmd_check(args) -> int:
    _require(args, "p")
    verdict = kinematic_predict(
        ModelParams(args.beta0, args.gamma0),
        args.n,
        args.p,
        epsilon=args.epsilon,
        trials=args.trials,
        rng=RngSeed(args.seed, args.stream),
    )
    emit(json.dumps(dataclasses.asdict(verdict), indent=2) + "\n", args.output)
    return 0


def _add_common(sub, seed=True):
    sub.add_argument("--output", "-o", help="output path (default: stdout)")
    sub.add_argument("--config", help="JSON file of flag defaults")
    if seed:
        sub.add_argument("--seed", type=int, default=0, help="RNG seed")
        sub.add_argument("--stream", type=int, default=0, help="RNG substream id")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mle-phase",
        description="Phase transition of MLE existence in high-dimensional logistic regression",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    b = subs.add_parser("boundary", help="theoretical boundary curve")
    b.add_argument("--rho", type=float, help="signal split in [0,1]: beta0 = rho*gamma")
    b.add_argument("--gamma-max", type=float, default=10.0)
    b.add_argument("--steps", type=int, default=101)
    b.add_argument("--gamma-cap", type=float, default=30.0,
                   help="drop grid points above this gamma (default 30)")
    b.add_argument("--prob-axis", action="store_true",
                   help="prepend P(y=1) = sigmoid(gamma) column (requires --rho 1)")
    b.add_argument("--order", type=int, help="quadrature order (default: auto)")
    b.add_argument("--tol", type=float, default=1e-9)
    _add_common(b, seed=False)
    b.set_defaults(func=cmd_boundary)

    d = subs.add_parser("phase-diagram", help="empirical existence probabilities")
    d.add_argument("--n", type=int, default=400)
    d.add_argument("--replicates", type=int, default=20)
    d.add_argument("--rho", type=float)
    d.add_argument("--kappa-min", type=float, default=0.05)
    d.add_argument("--kappa-max", type=float, default=0.6)
    d.add_argument("--kappa-steps", type=int, default=12)
    d.add_argument("--gamma-min", type=float, default=0.0)
    d.add_argument("--gamma-max", type=float, default=10.0)
    d.add_argument("--gamma-steps", type=int, default=11)
    d.add_argument("--no-intercept", action="store_true")
    d.add_argument("--paper-scale", action="store_true",
                   help=f"n={PAPER_SCALE_N}, {PAPER_SCALE_REPLICATES} replicates")
    d.add_argument("--workers", type=int, help="parallel workers (default: $MLE_PHASE_WORKERS or 1)")
    d.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    _add_common(d)
    d.set_defaults(func=cmd_phase_diagram)

    s = subs.add_parser("separable", help="LP separation test on a CSV dataset")
    s.add_argument("dataset", help="CSV with header y,x1,...,xp; y in {-1,1} or {0,1}")
    s.add_argument("--no-intercept", action="store_true")
    s.add_argument("--tol", type=float, default=1e-7)
    _add_common(s, seed=False)
    s.set_defaults(func=cmd_separable)

    q = subs.add_parser("qn", help="empirical boundary statistic trials")
    q.add_argument("--beta0", type=float, default=0.0)
    q.add_argument("--gamma0", type=float, default=0.0)
    q.add_argument("--n", type=int, default=4000)
    q.add_argument("--trials", type=int, default=20)
    q.add_argument("--tol", type=float, default=1e-8)
    _add_common(q)
    q.set_defaults(func=cmd_qn)

    t = subs.add_parser("statdim", help="statistical dimension of C(W)")
    t.add_argument("--n", type=int, default=1000)
    t.add_argument("--trials", type=int, default=500)
    t.add_argument("--basis", choices=["orthant", "ones", "yv"], default="yv")
    t.add_argument("--beta0", type=float, default=0.0)
    t.add_argument("--gamma0", type=float, default=0.0)
    _add_common(t)
    t.set_defaults(func=cmd_statdim)

    c = subs.add_parser("check", help="kinematic-formula existence prediction")
    c.add_argument("--beta0", type=float, default=0.0)
    c.add_argument("--gamma0", type=float, default=0.0)
    c.add_argument("--n", type=int, default=4000)
    c.add_argument("--p", type=int)
    c.add_argument("--epsilon", type=float, default=0.05)
    c.add_argument("--trials", type=int, default=200)
    _add_common(c)
    c.set_defaults(func=cmd_check)

    return parser


def _apply_config(parser, argv):
    """Merge --config JSON below explicit flags: flags > config > defaults."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(config, dict):
        raise UsageError(f"config {known.config} must hold a JSON object")
    defaults = {str(k).replace("-", "_"): v for k, v in config.items()}
    for sub in parser._subparsers._group_actions[0].choices.values():
        valid = {a.dest for a in sub._actions}
        sub.set_defaults(**{k: v for k, v in defaults.items() if k in valid})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return 1 if exc.code not in (0, None) else 0
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
