"""Figures for command reports (rendered off-screen)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def cohomology_figure(rows: list, path, title: str = "") -> None:
    """Bar chart of cohomology, cocycle and coboundary dimensions per degree."""
    degrees = [r["degree"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    width = 0.27
    series = (("dim_cocycles", "cocycles"), ("dim_coboundaries", "coboundaries"), ("cohomology_dim", "cohomology"))
    for k, (key, label) in enumerate(series):
        xs = [d + (k - 1) * width for d in degrees]
        bars = ax.bar(xs, [r[key] for r in rows], width, label=label)
        if key == "cohomology_dim":
            ax.bar_label(bars, fontsize=8)
    ax.set_xticks(degrees)
    ax.set_xlabel("degree")
    ax.set_ylabel("dimension")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-stable
    fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)
