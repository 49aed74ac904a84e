"""Line charts for RP curves and removal curves."""

import math
from pathlib import Path

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def new_figure(width: float = 8.0, height: float | None = None):
    golden_ratio = (math.sqrt(5) - 1.0) / 2.0
    if not height:
        height = width * golden_ratio
    return plt.subplots(figsize=(width, height), facecolor="w")


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def save_rp_curves(curves: pd.DataFrame, path: Path) -> None:
    """One line per (method, threshold kind) over rho, with eps as a dashed reference."""
    fig, ax = new_figure()
    for (method, kind), group in curves.groupby(["method", "threshold_kind"], sort=False):
        ax.plot(group["rho"], group["rp"], marker=".", label=f"{method} ({kind})")
    first = curves.iloc[0]
    ax.axhline(float(first["epsilon"]), color="gray", linestyle="--", linewidth=1)
    ax.set_title(f"{first['case']}, K={first['K']}, epsilon={first['epsilon']:g}")
    ax.set_xlabel("rho")
    ax.set_ylabel("rejection probability")
    ax.legend(loc="center left", bbox_to_anchor=(1.0, 0.5), fontsize="small")
    _save(fig, path)


def save_removal_curve(report: pd.DataFrame, label: str, epsilon: float, path: Path) -> None:
    fig, ax = new_figure()
    ax.plot(report["n_removed"] + 1, report["adjusted"], label=label)
    ax.axhline(epsilon, color="gray", linestyle="--", linewidth=1)
    ax.set_xscale("log")
    ax.set_title(f"Adjusted p-value after removing n smallest ({label})")
    ax.set_xlabel("n removed + 1")
    ax.set_ylabel("adjusted p-value")
    ax.legend()
    _save(fig, path)
