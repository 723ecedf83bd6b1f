"""Wall-time and memory benchmarking of the three solver strategies.

Problem generation is excluded from all measurements.  Timing and memory are
taken in separate passes: the timing pass runs the workload ``repeats`` times
with no instrumentation, and the memory pass runs it once more under
tracemalloc (whose allocation hooks would otherwise distort the timings) with
a background thread sampling current usage for the time-averaged figure.
NumPy registers its array allocations with tracemalloc, so both interpreter
and array memory are counted.  Scenarios at the same dimensions share the
same generated problem, which lets records double as cross-method
integration checks via the result digest.
"""

from __future__ import annotations

import hashlib
import threading
import time
import tracemalloc
from dataclasses import dataclass

import numpy as np

from .baselines import solve_ridge_naive, solve_ridge_rotated
from .errors import InternalInvariantError, InvalidInputError
from .frr import SolveOptions, solve_frr
from .linalg import decompose_design
from .simulate import SimulationSpec, simulate_design, simulate_targets

METHODS = ("naive", "rotated", "frr")
MEMORY_MECHANISM = "tracemalloc"

# Penalty levels per method, following the benchmark protocol: log-spaced
# alphas over nine decades for the standard solvers, evenly spaced fractions
# ending at 1 for the fraction-based solver.
SRR_LOG_RANGE = (-4.0, 5.0)
FRR_FRACTION_RANGE = (0.05, 1.0)


@dataclass(frozen=True)
class BenchScenario:
    method: str
    n_points: int
    n_predictors: int
    n_targets: int
    n_levels: int
    repeats: int = 1
    sweep: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidInputError(f"unknown method {self.method!r}")
        for name in ("n_points", "n_predictors", "n_targets", "n_levels", "repeats"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be at least 1")

    @property
    def label(self) -> str:
        return (f"{self.method}-d{self.n_points}-p{self.n_predictors}"
                f"-t{self.n_targets}-f{self.n_levels}")


@dataclass(frozen=True)
class BenchRecord:
    scenario: BenchScenario
    status: str
    wall_time_seconds: float
    peak_extra_memory_bytes: int
    mean_extra_memory_bytes: int
    memory_mechanism: str
    threads: int
    result_digest: str


def penalty_levels(method: str, n_levels: int) -> np.ndarray:
    if method == "frr":
        return np.linspace(*FRR_FRACTION_RANGE, n_levels)
    return np.logspace(*SRR_LOG_RANGE, n_levels)


def _workload(scenario: BenchScenario, X, Y, threads: int):
    levels = penalty_levels(scenario.method, scenario.n_levels)
    if scenario.method == "naive":
        return lambda: solve_ridge_naive(X, Y, levels)
    if scenario.method == "rotated":
        # The decomposition is part of model fitting and belongs inside the
        # measured region.
        return lambda: solve_ridge_rotated(decompose_design(X, Y), levels)
    opts = SolveOptions(threads=threads)

    def run_frr():
        sol = solve_frr(X, Y, levels, opts)
        return sol.coefficients, sol.resolved_alphas

    return run_frr


def _digest(result) -> str:
    h = hashlib.sha256()
    parts = result if isinstance(result, tuple) else (result,)
    for arr in parts:
        h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()


def _measure_memory(work) -> tuple[int, int]:
    samples: list[int] = []
    stop = threading.Event()

    def sample():
        while not stop.is_set():
            samples.append(tracemalloc.get_traced_memory()[0])
            time.sleep(0.002)

    tracemalloc.start()
    try:
        baseline = tracemalloc.get_traced_memory()[0]
        tracemalloc.reset_peak()
        sampler = threading.Thread(target=sample, daemon=True)
        sampler.start()
        try:
            work()
        finally:
            stop.set()
            sampler.join()
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    peak_extra = max(peak - baseline, 0)
    if samples:
        mean_extra = int(np.mean(np.maximum(np.asarray(samples) - baseline, 0)))
    else:
        mean_extra = 0
    return peak_extra, min(mean_extra, peak_extra)


def run_benchmark(scenarios, seed: int = 0, threads: int = 1) -> list[BenchRecord]:
    """Run every scenario and return one record each.

    Scenarios run sequentially to avoid timing interference.  An
    out-of-memory failure is recorded with status ``failed`` and the run
    continues.  Identical workloads are verified to produce bit-identical
    results across repeats; the digest of the result is part of the record.
    """
    problems: dict[tuple[int, int, int], tuple[np.ndarray, np.ndarray]] = {}
    records = []
    for scenario in scenarios:
        dims = (scenario.n_points, scenario.n_predictors, scenario.n_targets)
        if dims not in problems:
            spec = SimulationSpec(
                n_points=dims[0], n_predictors=dims[1], n_targets=dims[2],
                noise_mode="match_signal_sd", correlation_rounds=0,
                seed=int(np.random.SeedSequence([seed, *dims]).generate_state(1)[0]),
            )
            X = simulate_design(spec)
            Y, _ = simulate_targets(X, spec)
            problems[dims] = (X, Y)
        X, Y = problems[dims]
        work = _workload(scenario, X, Y, threads)
        try:
            times = []
            digest = None
            for _ in range(scenario.repeats):
                t0 = time.perf_counter()
                result = work()
                times.append(time.perf_counter() - t0)
                d = _digest(result)
                if digest is None:
                    digest = d
                elif d != digest:
                    raise InternalInvariantError(
                        f"{scenario.label}: results differ across repeats"
                    )
                del result
            peak, mean = _measure_memory(work)
            records.append(BenchRecord(
                scenario=scenario,
                status="ok",
                wall_time_seconds=float(np.mean(times)),
                peak_extra_memory_bytes=peak,
                mean_extra_memory_bytes=mean,
                memory_mechanism=MEMORY_MECHANISM,
                threads=threads,
                result_digest=digest,
            ))
        except MemoryError:
            records.append(BenchRecord(
                scenario=scenario, status="failed", wall_time_seconds=0.0,
                peak_extra_memory_bytes=0, mean_extra_memory_bytes=0,
                memory_mechanism=MEMORY_MECHANISM, threads=threads,
                result_digest="",
            ))
    return records


BENCH_CSV_HEADER = [
    "scenario", "method", "d", "p", "t", "f", "repeats", "sweep", "status",
    "wall_time_seconds", "peak_extra_memory_bytes", "mean_extra_memory_bytes",
    "memory_mechanism", "threads", "result_digest",
]

BENCH_JSON_SCHEMA = "fracsolve-bench/1"


def record_as_row(record: BenchRecord) -> list[str]:
    s = record.scenario
    return [
        s.label, s.method, str(s.n_points), str(s.n_predictors),
        str(s.n_targets), str(s.n_levels), str(s.repeats), s.sweep,
        record.status, repr(record.wall_time_seconds),
        str(record.peak_extra_memory_bytes), str(record.mean_extra_memory_bytes),
        record.memory_mechanism, str(record.threads), record.result_digest,
    ]


def emit_bench_report(records, out_dir) -> dict:
    """Write ``bench.csv`` (one row per record) and ``bench.json``.

    The CSV is in long format: one record per (method, dimensions) point, so
    sweep columns plot directly.  Returns the JSON document as a dict.
    """
    import json
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [",".join(BENCH_CSV_HEADER)]
    lines += [",".join(record_as_row(r)) for r in records]
    (out / "bench.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    doc = {
        "schema": BENCH_JSON_SCHEMA,
        "memory_mechanism": MEMORY_MECHANISM,
        "records": [
            {
                "scenario": r.scenario.label,
                "method": r.scenario.method,
                "d": r.scenario.n_points,
                "p": r.scenario.n_predictors,
                "t": r.scenario.n_targets,
                "f": r.scenario.n_levels,
                "repeats": r.scenario.repeats,
                "sweep": r.scenario.sweep,
                "status": r.status,
                "wall_time_seconds": r.wall_time_seconds,
                "peak_extra_memory_bytes": r.peak_extra_memory_bytes,
                "mean_extra_memory_bytes": r.mean_extra_memory_bytes,
                "threads": r.threads,
                "result_digest": r.result_digest,
            }
            for r in records
        ],
    }
    (out / "bench.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return doc
