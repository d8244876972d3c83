"""Static matplotlib figures for CLI reports."""
from __future__ import annotations

import math
import os

from .report import Report

_RC = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "savefig.dpi": 150,
    "figure.autolayout": True,
}


def render_figure(report: Report, directory: str) -> str | None:
    """Draw every series of ``report`` in its own panel and save ``<command>.png``."""
    if not report.series:
        return None
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    count = len(report.series)
    cols = min(count, 2)
    rows = math.ceil(count / cols)
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(rows, cols, figsize=(3.4 * cols, 2.6 * rows), squeeze=False)
        for ax, s in zip(axes.flat, report.series):
            ax.plot(s.x, s.y, marker="o" if len(s.x) < 40 else None, color="k")
            if s.logy:
                ax.set_yscale("log")
            ax.set_xlabel(s.xlabel)
            ax.set_ylabel(s.ylabel)
            ax.set_title(s.name)
        for ax in list(axes.flat)[count:]:
            ax.set_visible(False)
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, f"{report.command}.png")
        fig.savefig(path)
        plt.close(fig)
    return path
