"""Figure rendering for the CLI report paths.

Every renderer writes a PNG next to the delimited output and returns the
path.  The Agg backend keeps this headless-safe.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bounds import BoundReport
from .laws import HittingLaw, tail_from_alpha, tail_from_pi

__all__ = [
    "render_tail_figure",
    "render_sweep_figure",
    "render_mc_figure",
    "render_margins_figure",
]


def render_tail_figure(law: HittingLaw, report: BoundReport, t_grid, out_path: str) -> str:
    """Exact stationary tail against the quasi-stationary exponential envelope."""
    t_grid = np.asarray(t_grid, dtype=float)
    positive = t_grid[t_grid > 0]
    pi_tail = tail_from_pi(law, positive)
    alpha_tail = tail_from_alpha(law, positive)
    lower = (1 - report.r_m) * alpha_tail
    upper = lower + (report.r_m - report.pi_a) * np.exp(-positive / report.t_rel)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.loglog(positive, pi_tail, label="stationary tail", color="C0")
    ax.loglog(positive, alpha_tail, label="quasi-stationary exponential", color="C1", ls="--")
    ax.fill_between(positive, np.maximum(lower, 1e-300), np.maximum(upper, 1e-300),
                    color="C0", alpha=0.15, label="sharpness envelope")
    ax.set_xlabel("t")
    ax.set_ylabel("P(T_A > t)")
    ax.set_title(f"{report.graph}, A={report.target}")
    ax.legend(loc="lower left", fontsize=8)
    ax.set_ylim(bottom=max(1e-16, float(pi_tail.min()) / 10))
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return os.path.abspath(out_path)


def render_sweep_figure(rows: list[dict], fits: dict, out_path: str) -> str:
    """Log-log scaling of the sweep columns against the side length."""
    ms = np.array([row["m"] for row in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for key, marker in [("ab_error", "o"), ("refined_error", "s"), ("beta_gamma", "^")]:
        vals = np.array([row[key] for row in rows], dtype=float)
        slope = fits.get(key)
        label = key if slope is None else f"{key} (slope {slope:+.2f})"
        ax.loglog(ms, vals, marker=marker, label=label)
    ax.set_xlabel("side length m")
    ax.set_ylabel("value")
    ax.set_title("torus sweep scaling")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return os.path.abspath(out_path)


def render_margins_figure(rows: list[dict], out_path: str) -> str:
    """Worst margin per verdict across a verification battery (symlog x)."""
    by_verdict: dict[str, float] = {}
    for row in rows:
        name = row["verdict"]
        margin = float(row["margin"])
        by_verdict[name] = min(by_verdict.get(name, np.inf), margin)
    names = sorted(by_verdict, key=by_verdict.get)
    values = [by_verdict[name] for name in names]

    fig, ax = plt.subplots(figsize=(6.4, 0.3 * len(names) + 1.5))
    colors = ["C3" if v < 0 else "C2" for v in values]
    ax.barh(names, values, color=colors)
    ax.set_xscale("symlog", linthresh=1e-12)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_xlabel("worst margin (negative = violated)")
    ax.tick_params(axis="y", labelsize=7)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return os.path.abspath(out_path)


def render_mc_figure(t_grid, exact, survival, lower, upper, out_path: str, title: str = "") -> str:
    """Empirical tail with confidence band against the exact tail."""
    t_grid = np.asarray(t_grid, dtype=float)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.fill_between(t_grid, lower, upper, color="C1", alpha=0.25, label="Wilson band")
    ax.plot(t_grid, survival, color="C1", marker=".", ls="", label="empirical")
    ax.plot(t_grid, exact, color="C0", label="exact")
    ax.set_xlabel("t")
    ax.set_ylabel("P(T_A > t)")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return os.path.abspath(out_path)
