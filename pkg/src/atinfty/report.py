"""Report rendering: delimited tables plus matplotlib figures.

Every verb with ``--report-dir`` writes a CSV table of its result and one or
more PNG figures next to it.  Rendering is deterministic: the Agg backend,
fixed figure geometry, sorted rows and pinned PNG metadata make repeated runs
byte-identical.
"""

import csv
import os
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_DPI = 120
_META = {"Software": "atinfty"}


def write_csv(path: str, header: Sequence[str],
              rows: Sequence[Sequence]) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([str(c) for c in row])
    return path


def _save(fig, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, dpi=_DPI, metadata=_META)
    plt.close(fig)
    return path


def rank_staircase(path: str, ranks_at: Dict[int, int], title: str,
                   bound: Optional[int] = None) -> str:
    """Rank of an operator's window image against the window size."""
    windows = sorted(ranks_at)
    ranks = [ranks_at[w] for w in windows]
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.step(windows, ranks, where="post", marker="o")
    if bound is not None:
        ax.axhline(bound, linestyle="--", linewidth=1.0, label="bound")
        ax.legend(loc="best")
    ax.set_xlabel("window")
    ax.set_ylabel("rank")
    ax.set_title(title)
    ax.set_xticks(windows)
    fig.tight_layout()
    return _save(fig, path)


def value_bars(path: str, labels: Sequence[str], values: Sequence[float],
               title: str, ylabel: str) -> str:
    """Bar chart for small per-place or per-check numeric tables."""
    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(labels) + 2.0), 3.2))
    xs = range(len(labels))
    ax.bar(xs, list(values))
    ax.set_xticks(list(xs))
    ax.set_xticklabels(list(labels), rotation=30, ha="right")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.axhline(0.0, color="black", linewidth=0.8)
    fig.tight_layout()
    return _save(fig, path)


def doubling_plot(path: str, valuations: Sequence[int], title: str) -> str:
    """Newton-step residual valuations against the doubling reference."""
    steps = list(range(len(valuations)))
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.plot(steps, list(valuations), marker="o", label="residual valuation")
    if valuations:
        ref = [valuations[0] * (2**i) for i in steps]
        ax.plot(steps, ref, linestyle="--", linewidth=1.0,
                label="doubling reference")
    ax.set_xlabel("Newton step")
    ax.set_ylabel("valuation")
    ax.set_title(title)
    ax.set_xticks(steps)
    ax.legend(loc="best")
    fig.tight_layout()
    return _save(fig, path)


def pass_fail_bars(path: str, names: Sequence[str], passed: Sequence[int],
                   failed: Sequence[int], title: str) -> str:
    """Stacked pass/fail counts for suite runs."""
    xs = range(len(names))
    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(names) + 2.0), 3.2))
    ax.bar(xs, list(passed), label="pass")
    ax.bar(xs, list(failed), bottom=list(passed), label="fail")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(list(names), rotation=30, ha="right")
    ax.set_ylabel("checks")
    ax.set_title(title)
    ax.legend(loc="best")
    fig.tight_layout()
    return _save(fig, path)


def level_plot(path: str, levels: Sequence[int], title: str) -> str:
    """Filtration level per correction round of a cocycle factorization."""
    steps = list(range(1, len(levels) + 1))
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.plot(steps, list(levels), marker="o")
    ax.set_xlabel("round")
    ax.set_ylabel("filtration level")
    ax.set_title(title)
    ax.set_xticks(steps)
    fig.tight_layout()
    return _save(fig, path)
