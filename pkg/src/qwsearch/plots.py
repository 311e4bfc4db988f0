"""Figure rendering for emitted datasets.

Each renderer takes a dataset produced by the CLI and writes a PNG next
to the delimited output.  Rendering is file-only (Agg backend); nothing
here opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .datasets import Dataset

_FIGSIZE = (6.0, 3.8)

_EIGEN_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _save(fig, path: str | Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_overlap(dataset: Dataset, path: str | Path) -> None:
    """Squared eigenstate overlaps versus jumping rate, one panel per reference."""
    gammas = dataset.column("gamma")
    refs = sorted({c.split("_psi")[0] for c in dataset.columns if "_psi" in c})
    fig, axes = plt.subplots(len(refs), 1, figsize=(_FIGSIZE[0], 2.2 * len(refs)), sharex=True)
    if len(refs) == 1:
        axes = [axes]
    for ax, ref in zip(axes, refs):
        cols = [c for c in dataset.columns if c.startswith(f"{ref}_psi")]
        for col in cols:
            idx = int(col.rsplit("psi", 1)[1])
            color = _EIGEN_COLORS[idx % len(_EIGEN_COLORS)]
            ax.plot(gammas, dataset.column(col), color=color, label=col.split("_", 1)[1])
        ax.set_ylabel(f"overlap with {ref}")
        ax.set_ylim(-0.05, 1.05)
        ax.legend(fontsize=7, ncol=2, loc="center right")
    axes[-1].set_xlabel("jumping rate")
    _save(fig, path)


def render_evolution(dataset: Dataset, path: str | Path) -> None:
    """Success probabilities versus time."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    t = dataset.column("t")
    styles = {"p_a": ("solid", "black"), "p_b": ("dashed", "#d62728"), "p_total": ("dashdot", "#1f77b4")}
    for col in ("p_a", "p_b", "p_total"):
        if col in dataset.columns:
            linestyle, color = styles[col]
            ax.plot(t, dataset.column(col), linestyle=linestyle, color=color, label=col)
    ax.set_xlabel("time")
    ax.set_ylabel("probability")
    ax.set_ylim(-0.02, 1.05)
    ax.legend()
    _save(fig, path)


def render_compare(dataset: Dataset, path: str | Path) -> None:
    """Runtimes of the three resonances versus the varied marked count."""
    varied = dataset.metadata.get("varied", dataset.columns[0])
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    k = dataset.column(varied)
    for col, style in (("t_a", "solid"), ("t_b", "dashed"), ("t_star", "dashdot")):
        ax.plot(k, dataset.column(col), linestyle=style, label=col)
    threshold = dataset.metadata.get("threshold")
    if threshold is not None:
        ax.axvline(threshold, color="gray", linewidth=0.8, label=f"threshold {threshold:g}")
    ax.set_xlabel(varied)
    ax.set_ylabel("runtime")
    ax.legend()
    _save(fig, path)


def render_detune(dataset: Dataset, path: str | Path) -> None:
    """Peak success probability versus rate offset."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(dataset.column("epsilon"), dataset.column("p_peak"), marker="o")
    ax.set_xlabel("offset from critical rate")
    ax.set_ylabel("peak success probability")
    ax.set_ylim(-0.02, 1.05)
    _save(fig, path)


#: renderer for each dataset kind emitted by the CLI
RENDERERS = {
    "overlap": render_overlap,
    "evolve": render_evolution,
    "compare": render_compare,
    "detune": render_detune,
}
