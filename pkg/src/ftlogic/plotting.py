"""Deterministic SVG figures for sweep reports and error profiles."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# 800x600 user units in the SVG viewBox (matplotlib writes 72 units per inch)
FIGSIZE = (800 / 72, 600 / 72)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")

RC = {
    "svg.hashsalt": "ftlogic",
    "svg.fonttype": "none",
    "font.size": 14,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.8,
    "lines.markersize": 5,
}

_TITLES = {
    "availability": ("Availability", "availability (correct / total)"),
    "tolerance_rate": ("Tolerance rate", "tolerance rate (incorrect / error bits, lower = better)"),
}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)


def plot_sweep(report, quantity: str, path) -> None:
    """One line with markers per label over the flip probability."""
    title, ylabel = _TITLES[quantity]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=FIGSIZE)
        for i, label in enumerate(report.labels):
            pts = report.series(label)
            xs, ys = [], []
            for pt in pts:
                v = getattr(pt, quantity)
                if v is not None:
                    xs.append(pt.p)
                    ys.append(float(v))
            (line,) = ax.plot(xs, ys, marker="o", color=COLORS[i % len(COLORS)], label=label)
            line.set_gid(f"series-{i}")
        ax.set_xlabel("gate bit-flip probability p")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend(loc="best")
        fig.tight_layout()
        _save(fig, path)


def plot_error_profile(profile, path, title: str = "Error profile") -> None:
    """Stacked bars per net: trials with 1, 2, ... erroneous bits."""
    nets = list(profile.counts)
    depth = max(len(c) for c in profile.counts.values())
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=FIGSIZE)
        bottom = [0] * len(nets)
        for k in range(depth):
            heights = [c[k] if k < len(c) else 0 for c in profile.counts.values()]
            ax.bar(nets, heights, bottom=bottom, color=COLORS[k % len(COLORS)],
                   label=f"{k + 1}-bit error", gid=f"bits-{k + 1}")
            bottom = [b + h for b, h in zip(bottom, heights)]
        ax.set_xlabel("net")
        ax.set_ylabel(f"trials with errors (of {profile.trials})")
        ax.set_title(title)
        ax.tick_params(axis="x", labelrotation=45)
        ax.legend(loc="best")
        fig.tight_layout()
        _save(fig, path)
