"""Figures written next to the CSV/text reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["pdf.fonttype"] = 42
matplotlib.rcParams["ps.fonttype"] = 42
matplotlib.rcParams["axes.spines.top"] = False
matplotlib.rcParams["axes.spines.right"] = False


def plot_report(report, path: str | Path) -> Path:
    """Theoretical vs empirical frequencies of an ExperimentReport."""
    idx = list(range(len(report.theoretical)))
    # trim the long zero tail of rank and overhead laws
    last = max((i for i in idx if report.theoretical[i] > 1e-6 or report.empirical[i] > 0), default=0)
    idx = idx[: last + 1]
    fig, ax = plt.subplots(figsize=(6, 4))
    w = 0.4
    ax.bar([i - w / 2 for i in idx], [report.theoretical[i] for i in idx], width=w, label="theory", color="0.6")
    ax.bar([i + w / 2 for i in idx], [report.empirical[i] for i in idx], width=w, label="empirical", color="tab:blue")
    ax.set_xlabel(report.index_name)
    ax.set_ylabel("probability")
    ax.set_title(f"{report.label} ({report.trials} trials)")
    ax.set_xticks(idx)
    ax.legend(frameon=False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_profile(profile, path: str | Path) -> Path:
    """Distance, dual-distance and distance-to-code distributions of a code."""
    n = profile.n
    xs = list(range(n + 1))
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5), sharex=True)
    series = [
        ("distance distribution", profile.distance_distribution, "tab:blue"),
        ("dual distribution", profile.dual_distribution, "tab:orange"),
        ("distances to code (alpha)", profile.alpha, "tab:green"),
    ]
    for ax, (title, values, color) in zip(axes, series):
        ax.bar(xs, [float(v) for v in values], color=color)
        ax.set_title(title)
        ax.set_xlabel("i")
    axes[1].axvline(profile.dual_distance, color="k", ls="--", lw=1)
    axes[2].axvline(float(profile.average_radius), color="k", ls="--", lw=1)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
