"""Command-line front end.

Subcommands: ``fit`` (solve at requested fractions), ``cv`` (holdout
cross-validation), ``simulate`` (synthetic problem generation), ``bench``
(solver benchmarking), ``report`` (tables and SVG charts from artifacts).

Exit codes: 0 success, 2 bad arguments, 3 input parse/shape error,
4 degenerate design, 1 unexpected internal failure.  Every failure prints a
single ``error[CODE]: message`` line to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .benchmark import BenchScenario, emit_bench_report, run_benchmark
from .errors import DegenerateDesignError, FracsolveError, InvalidInputError
from .evaluate import cross_validate, split_holdout
from .frr import SolveOptions, as_fraction_grid, solve_frr
from .matio import format_float, read_matrix, write_matrix_csv, write_matrix_frmx
from .simulate import SimulationSpec, simulate_design, simulate_targets

FIT_SCHEMA = "fracsolve-fit/1"
CV_SCHEMA = "fracsolve-cv/1"
SIMULATE_SCHEMA = "fracsolve-simulate/1"

THREADS_ENV = "FRACSOLVE_THREADS"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error[usage]: {message}", file=sys.stderr)
        raise SystemExit(2)


def parse_fractions(spec: str) -> np.ndarray:
    """Parse ``start:stop:step``, a comma list, or a single fraction."""
    try:
        if ":" in spec:
            parts = [float(v) for v in spec.split(":")]
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = parts
            if step <= 0:
                raise ValueError("step must be positive")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            if n < 1:
                raise ValueError("empty fraction range")
            values = np.round(start + step * np.arange(n), 12)
        else:
            values = np.round([float(v) for v in spec.split(",")], 12)
    except ValueError as exc:
        raise InvalidInputError(f"bad fraction spec {spec!r}: {exc}") from None
    return as_fraction_grid(values)


def resolve_threads(flag_value: int) -> int:
    env = os.environ.get(THREADS_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise InvalidInputError(f"{THREADS_ENV} must be an integer, got {env!r}")
        if value < 1:
            raise InvalidInputError(f"{THREADS_ENV} must be at least 1")
        return value
    return max(1, flag_value)


def json_number(value):
    """JSON-safe scalar: infinities become the strings "inf"/"-inf", NaN null."""
    v = float(value)
    if math.isnan(v):
        return None
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def write_json(path, doc) -> None:
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n",
        encoding="utf-8",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracsolve", description=__doc__)
    parser.add_argument("--version", action="version", version=f"fracsolve {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fit = sub.add_parser("fit", help="solve at requested norm fractions")
    fit.add_argument("--design", required=True)
    fit.add_argument("--targets", required=True)
    fit.add_argument("--fracs", default="0.05:1.0:0.05")
    fit.add_argument("--tol", type=float, default=1e-10)
    fit.add_argument("--standardize", choices=["none", "center", "zscore"], default="none")
    fit.add_argument("--threads", type=int, default=1)
    fit.add_argument("--out", required=True)

    cv = sub.add_parser("cv", help="holdout cross-validation over fractions")
    cv.add_argument("--design", required=True)
    cv.add_argument("--targets", required=True)
    cv.add_argument("--fracs", default="0.05:1.0:0.05")
    cv.add_argument("--train-frac", type=float, default=0.5)
    cv.add_argument("--seed", type=int, default=0)
    cv.add_argument("--tol", type=float, default=1e-10)
    cv.add_argument("--standardize", choices=["none", "center", "zscore"], default="none")
    cv.add_argument("--threads", type=int, default=1)
    cv.add_argument("--out", required=True)

    sim = sub.add_parser("simulate", help="generate a synthetic problem")
    sim.add_argument("--d", type=int, required=True, help="number of data points")
    sim.add_argument("--p", type=int, required=True, help="number of predictors")
    sim.add_argument("--t", type=int, default=1, help="number of targets")
    sim.add_argument("--correlation-rounds", type=int, default=None)
    sim.add_argument("--noise-mode", choices=["unit", "match_signal_sd"], default="unit")
    sim.add_argument("--noise-scale", type=float, default=1.0)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--format", choices=["csv", "frmx"], default="csv")
    sim.add_argument("--out", required=True)

    bench = sub.add_parser("bench", help="time and memory benchmark of the solvers")
    bench.add_argument("--d", type=int, default=1000)
    bench.add_argument("--p", type=int, default=1000)
    bench.add_argument("--t", type=int, default=1000)
    bench.add_argument("--f", type=int, default=20, help="number of penalty levels")
    bench.add_argument("--sweep", choices=["d", "p", "t", "f"], default=None)
    bench.add_argument("--values", default=None, help="comma list of swept values")
    bench.add_argument("--methods", default="naive,rotated,frr")
    bench.add_argument("--repeats", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--threads", type=int, default=1)
    bench.add_argument("--out", required=True)

    rep = sub.add_parser("report", help="render artifacts into tables and SVG charts")
    rep.add_argument("--cv-curves", default=None, help="cv_curves.csv from the cv command")
    rep.add_argument("--fit", default=None, help="output directory of a fit run")
    rep.add_argument("--bench", default=None, help="bench.csv from the bench command")
    rep.add_argument("--bench-factor", choices=["d", "p", "t", "f"], default="f")
    rep.add_argument("--target", type=int, default=0, help="target for coefficient paths")
    rep.add_argument("--out", required=True)
    return parser


def cmd_fit(args) -> int:
    fracs = parse_fractions(args.fracs)
    X = read_matrix(args.design)
    Y = read_matrix(args.targets)
    threads = resolve_threads(args.threads)
    opts = SolveOptions(tol=args.tol, standardize=args.standardize, threads=threads)
    t0 = time.perf_counter()
    sol = solve_frr(X, Y, fracs, opts)
    wall = time.perf_counter() - t0

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    p, f, t = sol.coefficients.shape
    # Fraction-major layout: all targets for the first fraction, then the
    # second, etc.  C-order reshape of (f, t) gives exactly that.
    write_matrix_frmx(out / "coefficients.frmx", sol.coefficients.reshape(p, f * t))
    write_matrix_csv(out / "alphas.csv", sol.resolved_alphas)
    write_matrix_csv(out / "achieved_fractions.csv", sol.achieved_fractions)
    files = ["coefficients.frmx", "alphas.csv", "achieved_fractions.csv", "summary.json"]
    if sol.intercepts is not None:
        write_matrix_csv(out / "intercepts.csv", sol.intercepts)
        files.insert(-1, "intercepts.csv")
    summary = {
        "schema": FIT_SCHEMA,
        "design": {"rows": int(X.shape[0]), "cols": int(X.shape[1])},
        "targets": t,
        "fractions": [float(v) for v in sol.fractions],
        "tol": args.tol,
        "standardize": args.standardize,
        "threads": threads,
        "effective_rank": sol.effective_rank,
        "degenerate_targets": list(sol.degenerate_targets),
        "coefficient_layout": "fraction-major",
        "files": files,
        "wall_time_seconds": wall,
    }
    write_json(out / "summary.json", summary)
    return 0


def cmd_cv(args) -> int:
    fracs = parse_fractions(args.fracs)
    X = read_matrix(args.design)
    Y = read_matrix(args.targets)
    threads = resolve_threads(args.threads)
    split = split_holdout(X.shape[0], args.train_frac, args.seed)
    t0 = time.perf_counter()
    report = cross_validate(X, Y, fracs, split, mode=args.standardize,
                            tol=args.tol, threads=threads)
    wall = time.perf_counter() - t0

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["target,fraction,r2"]
    for tr in report.per_target:
        for frac, r2 in zip(report.fractions, tr.r2_by_fraction):
            lines.append(f"{tr.target_index},{format_float(frac)},{format_float(r2)}")
    (out / "cv_curves.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    doc = {
        "schema": CV_SCHEMA,
        "fractions": [float(v) for v in report.fractions],
        "train_frac": args.train_frac,
        "seed": args.seed,
        "standardize": args.standardize,
        "train_indices": [int(i) for i in report.train_indices],
        "test_indices": [int(i) for i in report.test_indices],
        "per_target": [
            {
                "target": tr.target_index,
                "flagged": tr.flagged,
                "flag_reason": tr.flag_reason,
                "best_fraction": json_number(tr.best_fraction),
                "best_r2": json_number(tr.best_r2),
                "best_alpha": json_number(tr.best_alpha),
                "r2_by_fraction": [json_number(v) for v in tr.r2_by_fraction],
            }
            for tr in report.per_target
        ],
        "wall_time_seconds": wall,
    }
    write_json(out / "cv_report.json", doc)
    return 0


def cmd_simulate(args) -> int:
    spec = SimulationSpec(
        n_points=args.d, n_predictors=args.p, n_targets=args.t,
        noise_mode=args.noise_mode, noise_scale=args.noise_scale,
        correlation_rounds=args.correlation_rounds, seed=args.seed,
    )
    X = simulate_design(spec)
    Y, beta_true = simulate_targets(X, spec)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    writer = write_matrix_frmx if args.format == "frmx" else write_matrix_csv
    ext = args.format
    writer(out / f"design.{ext}", X)
    writer(out / f"targets.{ext}", Y)
    writer(out / f"true_coefficients.{ext}", beta_true)
    write_json(out / "simulate.json", {
        "schema": SIMULATE_SCHEMA,
        "d": args.d, "p": args.p, "t": args.t,
        "correlation_rounds": spec.rounds,
        "noise_mode": args.noise_mode,
        "noise_scale": args.noise_scale,
        "seed": args.seed,
        "generator": "philox",
        "format": args.format,
    })
    return 0


def cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    base = {"d": args.d, "p": args.p, "t": args.t, "f": args.f}
    points = [dict(base)]
    sweep = ""
    if args.sweep is not None:
        if args.values is None:
            raise InvalidInputError("--sweep requires --values")
        try:
            values = [int(v) for v in args.values.split(",")]
        except ValueError:
            raise InvalidInputError(f"bad --values list {args.values!r}") from None
        sweep = args.sweep
        points = []
        for v in values:
            pt = dict(base)
            pt[args.sweep] = v
            points.append(pt)
    scenarios = [
        BenchScenario(method=m, n_points=pt["d"], n_predictors=pt["p"],
                      n_targets=pt["t"], n_levels=pt["f"],
                      repeats=args.repeats, sweep=sweep)
        for pt in points
        for m in methods
    ]
    threads = resolve_threads(args.threads)
    records = run_benchmark(scenarios, seed=args.seed, threads=threads)
    emit_bench_report(records, args.out)
    return 0


def cmd_report(args) -> int:
    from . import reporting  # matplotlib import deferred to the report path

    if args.cv_curves is None and args.fit is None and args.bench is None:
        raise InvalidInputError("report needs at least one of --cv-curves/--fit/--bench")
    out = Path(args.out)

    rendered = []
    if args.cv_curves is not None:
        curves = reporting.read_cv_curves(args.cv_curves)
        out.mkdir(parents=True, exist_ok=True)
        reporting.render_cv_chart(curves, out / "r2_vs_fraction.svg")
        rendered.append("r2_vs_fraction.svg")
    if args.fit is not None:
        coef, alphas, achieved, summary = reporting.load_fit_artifacts(args.fit)
        out.mkdir(parents=True, exist_ok=True)
        reporting.write_norm_table(coef, alphas, achieved, summary, out / "norms.csv")
        reporting.render_norm_chart(coef, summary, out / "norm_vs_fraction.svg")
        reporting.render_path_chart(coef, summary, out / "coefficient_paths.svg",
                                    target=args.target)
        rendered += ["norms.csv", "norm_vs_fraction.svg", "coefficient_paths.svg"]
    if args.bench is not None:
        rows = reporting.read_bench_table(args.bench)
        out.mkdir(parents=True, exist_ok=True)
        name = f"bench_time_vs_{args.bench_factor}.svg"
        reporting.render_bench_chart(rows, out / name, factor=args.bench_factor)
        rendered.append(name)
    for name in rendered:
        print(name)
    return 0


_COMMANDS = {
    "fit": cmd_fit,
    "cv": cmd_cv,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except DegenerateDesignError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 4
    except FracsolveError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error[internal]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
