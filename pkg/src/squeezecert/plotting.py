"""Figure rendering for scan reports.

Presentation layer only: values are converted to floats for drawing, the
certified data stays in the CSV/JSON output next to the figures.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .coefficients import Family
from .squeeze import ScanRow

_FAMILY_TARGET = {"logcos": "cos x", "logtan": "x/tan x"}


def _clean(rows: list[ScanRow]) -> list[ScanRow]:
    return [r for r in rows if r.error is None]


def render_constant_figure(rows: list[ScanRow], family: Family, path: str) -> None:
    """Best exponent constant against the interval end, with the c1 floor."""
    good = _clean(rows)
    xs = [float(r.x0) for r in good]
    ys = [float(r.best_constant.midpoint) for r in good]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(xs, ys, marker="o", ms=3.5, lw=1.2, color="#1f77b4",
            label="best constant")
    ax.axhline(float(family.c1), color="#888888", lw=1.0, ls="--",
               label=f"limit {family.c1} at 0")
    ax.set_xlabel(r"interval end $x_0$")
    ax.set_ylabel("exponent constant")
    target = _FAMILY_TARGET.get(family.tag, family.tag)
    ax.set_title(f"Best lower-bound exponent for {target}")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3, lw=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_error_figure(rows: list[ScanRow], family: Family, path: str) -> None:
    """Largest approximation error and its location across the grid."""
    good = _clean(rows)
    xs = [float(r.x0) for r in good]
    deltas = [float(r.delta.midpoint) for r in good]
    t0s = [float(r.t0.midpoint) for r in good]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 5.6), sharex=True)
    ax1.plot(xs, deltas, marker="o", ms=3.5, lw=1.2, color="#d62728")
    ax1.set_ylabel(r"largest error $\delta$")
    ax2.plot(xs, t0s, marker="s", ms=3.5, lw=1.2, color="#2ca02c")
    ax2.set_ylabel(r"error location $t_0$")
    ax2.set_xlabel(r"interval end $x_0$")
    target = _FAMILY_TARGET.get(family.tag, family.tag)
    ax1.set_title(f"Quadratic-exponent approximation error for {target}")
    for ax in (ax1, ax2):
        ax.grid(alpha=0.3, lw=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
