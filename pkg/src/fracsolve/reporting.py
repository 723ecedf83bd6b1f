"""Plot-ready tables and static SVG charts from solver and benchmark artifacts.

Charts are rendered with matplotlib's SVG backend.  Output is deterministic:
the SVG hash salt is pinned and the creation date is stripped, so identical
inputs produce identical bytes.  Every per-series line carries a ``gid`` so
the SVG contains one identifiable element group per target / predictor /
method.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "fracsolve"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np

from .errors import InvalidInputError
from .matio import format_float, read_matrix_csv, read_matrix_frmx

_SAVEFIG_KW = {"format": "svg", "metadata": {"Date": None}}


def _save(fig, path) -> None:
    fig.savefig(path, **_SAVEFIG_KW)
    plt.close(fig)


def read_cv_curves(path):
    """Parse a ``target,fraction,r2`` long-format CSV into a dict of curves."""
    curves: dict[int, list[tuple[float, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"target", "fraction", "r2"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise InvalidInputError(f"{path} lacks the target,fraction,r2 columns")
        try:
            for row in reader:
                curves.setdefault(int(row["target"]), []).append(
                    (float(row["fraction"]), float(row["r2"]))
                )
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"{path}: bad curve row: {exc}") from None
    if not curves:
        raise InvalidInputError(f"{path} contains no curve rows")
    return curves


def render_cv_chart(curves, path) -> None:
    """R2 versus requested fraction, one line per target."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for target in sorted(curves):
        pts = curves[target]
        ax.plot([f for f, _ in pts], [r for _, r in pts],
                gid=f"target-{target}", label=f"target {target}")
    ax.set_xlabel("requested fraction")
    ax.set_ylabel("cross-validated R$^2$")
    if len(curves) <= 12:
        ax.legend(fontsize=8)
    _save(fig, path)


def load_fit_artifacts(fit_dir):
    """Load coefficients, alphas, achieved fractions and the summary of a fit."""
    fit = Path(fit_dir)
    try:
        summary = json.loads((fit / "summary.json").read_text(encoding="utf-8"))
        f = len(summary["fractions"])
        t = int(summary["targets"])
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidInputError(f"{fit}/summary.json is not a fit summary: {exc}") from None
    coef_flat = read_matrix_frmx(fit / "coefficients.frmx")
    alphas = read_matrix_csv(fit / "alphas.csv")
    achieved = read_matrix_csv(fit / "achieved_fractions.csv")
    if coef_flat.shape[1] != f * t:
        raise InvalidInputError(
            f"coefficients have {coef_flat.shape[1]} columns, expected {f * t}"
        )
    coef = coef_flat.reshape(coef_flat.shape[0], f, t)
    return coef, alphas, achieved, summary


def write_norm_table(coef, alphas, achieved, summary, path) -> None:
    """Long-format table of per-(fraction, target) norms and resolved alphas."""
    fracs = summary["fractions"]
    lines = ["target,fraction,coef_norm,achieved_fraction,alpha"]
    for j in range(summary["targets"]):
        for i, frac in enumerate(fracs):
            norm = float(np.linalg.norm(coef[:, i, j]))
            lines.append(
                f"{j},{format_float(frac)},{format_float(norm)},"
                f"{format_float(achieved[i, j])},{format_float(alphas[i, j])}"
            )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def render_norm_chart(coef, summary, path) -> None:
    """Coefficient L2-norm (relative to the largest) versus requested fraction."""
    fracs = summary["fractions"]
    fig, ax = plt.subplots(figsize=(6, 4))
    for j in range(summary["targets"]):
        norms = np.linalg.norm(coef[:, :, j], axis=0)
        top = norms.max()
        if top > 0:
            norms = norms / top
        ax.plot(fracs, norms, gid=f"target-{j}")
    ax.set_xlabel("requested fraction")
    ax.set_ylabel("relative coefficient norm")
    _save(fig, path)


def render_path_chart(coef, summary, path, target: int = 0) -> None:
    """Coefficient paths (one line per predictor) across fractions, one target."""
    if not (0 <= target < summary["targets"]):
        raise InvalidInputError(f"target {target} out of range")
    fracs = summary["fractions"]
    fig, ax = plt.subplots(figsize=(6, 4))
    for i in range(coef.shape[0]):
        ax.plot(fracs, coef[i, :, target], gid=f"predictor-{i}", linewidth=0.8)
    ax.set_xlabel("requested fraction")
    ax.set_ylabel("coefficient")
    ax.set_title(f"target {target}")
    _save(fig, path)


def read_bench_table(path):
    """Parse ``bench.csv`` rows into dicts with numeric fields converted."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise InvalidInputError(f"{path} contains no benchmark rows")
    try:
        for row in rows:
            for key in ("d", "p", "t", "f"):
                row[key] = int(row[key])
            for key in ("wall_time_seconds", "peak_extra_memory_bytes",
                        "mean_extra_memory_bytes"):
                row[key] = float(row[key])
    except (TypeError, ValueError, KeyError) as exc:
        raise InvalidInputError(f"{path}: bad benchmark row: {exc}") from None
    return rows


def render_bench_chart(rows, path, factor: str = "f") -> None:
    """Wall time versus a swept factor, one line per method, log-log axes."""
    if factor not in ("d", "p", "t", "f"):
        raise InvalidInputError(f"unknown sweep factor {factor!r}")
    fig, ax = plt.subplots(figsize=(6, 4))
    plotted = []
    for method in sorted({row["method"] for row in rows}):
        pts = sorted(
            (row[factor], row["wall_time_seconds"])
            for row in rows
            if row["method"] == method and row["status"] == "ok"
        )
        if pts:
            plotted.extend(y for _, y in pts)
            ax.plot([x for x, _ in pts], [y for _, y in pts],
                    marker="o", gid=f"method-{method}", label=method)
    ax.set_xlabel(factor)
    ax.set_ylabel("wall time (s)")
    ax.set_xscale("log")
    if plotted and min(plotted) > 0:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    _save(fig, path)


def count_svg_groups(path, prefix: str) -> int:
    """Number of element groups whose gid starts with ``prefix`` in an SVG file."""
    text = Path(path).read_text(encoding="utf-8")
    return text.count(f'id="{prefix}')
