"""Report figures rendered to files next to the delimited outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def save_similarity_cdf(records, path) -> Path:
    """CDFs of vanilla-pair similarities (one line per run slot) against the
    modified-browser similarities."""
    path = Path(path)
    records = list(records)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    n_runs = max((len(r.vanilla_sims) for r in records), default=0)
    for run in range(n_runs):
        values = sorted(r.vanilla_sims[run] for r in records if len(r.vanilla_sims) > run)
        if values:
            y = np.arange(1, len(values) + 1) / len(values)
            ax.step(values, y, where="post", alpha=0.6, label=f"vanilla pair {run + 1}")
    modified = sorted(r.modified_sim for r in records)
    if modified:
        y = np.arange(1, len(modified) + 1) / len(modified)
        ax.step(modified, y, where="post", color="black", linewidth=2.0,
                label="with replacements")
    ax.set_xlabel("similarity (NCC)")
    ax.set_ylabel("fraction of sites")
    ax.set_xlim(0, 1.0)
    ax.set_ylim(0, 1.0)
    ax.grid(alpha=0.3)
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_heatmap(grid, path, title: str) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    im = ax.imshow(grid, cmap="inferno", vmin=0.0, vmax=max(float(grid.max()), 1e-9),
                   aspect="auto")
    ax.set_title(title)
    ax.set_xticks([])
    ax.set_yticks([])
    fig.colorbar(im, ax=ax, fraction=0.046, label="differing-pixel frequency")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_tracking_ast_distribution(counts_per_url, path) -> Path:
    """Histogram of how many tracking subtrees each tracking URL carries."""
    path = Path(path)
    counts = sorted(counts_per_url)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if counts:
        top = max(counts)
        bins = np.arange(0.5, top + 1.5, 1) if top <= 50 else 50
        ax.hist(counts, bins=bins, color="#3465a4", edgecolor="white")
        ax.axvline(float(np.median(counts)), color="crimson", linestyle="--",
                   label=f"median = {np.median(counts):g}")
        ax.legend()
    ax.set_xlabel("tracking ASTs per tracking URL")
    ax.set_ylabel("URLs")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
