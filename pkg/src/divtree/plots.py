"""Figure rendering for the report paths.

Only this module imports matplotlib; the core library never does. Each
report subcommand writes its PNG next to the delimited output. Figures
use the Agg backend and fixed metadata so identical inputs produce
identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .bounds import alpha_for, bound_curves  # noqa: E402

_SAVE_KW = dict(dpi=150, metadata={"Software": None})
_METHOD_ORDER = ("gmm", "ict-basic", "ict-greedy", "ict-inherit")


def _by_method(records):
    groups: dict[str, list] = {}
    for rec in records:
        groups.setdefault(rec.method, []).append(rec)
    return {m: groups[m] for m in _METHOD_ORDER if m in groups}


def plot_distribution(records, path: str | Path, b: float) -> None:
    """Histogram of the observed ratios per method, with the proven factor
    as a dashed vertical line."""
    groups = _by_method(records)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for method, recs in groups.items():
        ratios = [r.ratio for r in recs if r.ratio is not None]
        if not ratios:
            continue
        ax.hist(ratios, bins=30, histtype="step", label=method)
        ax.axvline(alpha_for(method, b), linestyle="--", linewidth=1, alpha=0.6)
    ax.set_xlabel("observed ratio $d^*/\\mathrm{div}$")
    ax.set_ylabel("trials")
    ax.set_title(f"ratio distribution (b={b:g})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plot_relative(records, path: str | Path) -> None:
    """Curves of div(baseline)/div(method) against k."""
    groups = _by_method(records)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for method, recs in groups.items():
        if method == "gmm":
            continue
        recs = sorted(recs, key=lambda r: r.k)
        ax.plot([r.k for r in recs], [r.ratio_vs_gmm for r in recs],
                marker=".", label=method)
    ax.axhline(1.0, color="grey", linewidth=0.8)
    ax.set_xlabel("k")
    ax.set_ylabel("diversity relative to the greedy baseline")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plot_timing(records, path: str | Path) -> None:
    """Selection wall time against k, per method."""
    groups = _by_method(records)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for method, recs in groups.items():
        recs = sorted(recs, key=lambda r: r.k)
        ax.plot([r.k for r in recs], [r.time_ms for r in recs],
                marker=".", label=method)
    ax.set_xlabel("k")
    ax.set_ylabel("selection time [ms]")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plot_bound_curves(b: float, path: str | Path, samples: int = 2000) -> None:
    """Two panels: guaranteed factors over the base, and the two bound
    branches over beta for the given base."""
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    bases = [1.0 + 0.02 * i for i in range(5, 151)]
    left.plot(bases, [2.0 * x * x / (x - 1.0) for x in bases], label="random subset")
    left.plot(bases, [2.0 + 2.0 * x / (x - 1.0) for x in bases], label="greedy subsets")
    left.set_xlabel("base b")
    left.set_ylabel("guaranteed factor")
    left.set_ylim(0, 30)
    left.legend()

    rows = bound_curves(b, samples)
    betas = [r[0] for r in rows]
    right.plot(betas, [r[1] for r in rows], label="best layer subset")
    right.plot(betas, [r[2] for r in rows], label="greedy layer subset")
    right.set_xlabel("beta")
    right.set_ylabel("guaranteed diversity / optimum")
    right.set_title(f"b = {b:g}")
    right.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
