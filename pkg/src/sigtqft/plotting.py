"""Static figures written to files with matplotlib's Agg backend.

The output format follows the file suffix (``.svg``, ``.png``, ``.pdf``).
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.0),
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.labelsize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "svg.hashsalt": "sigtqft",  # stable element ids across runs
}

LABELS = {
    "fig1": r"$\sigma_2(q/p)/p^2$",
    "fig2": r"$\sigma_3(q/p)/p^4$",
    "fig3": r"$\sigma_1(q/p; 2k)/p$",
}


def _f(v) -> float:
    if isinstance(v, Fraction):
        return v.numerator / v.denominator
    return float(v)


def figure(which: str, rows: list[dict], path) -> Path:
    """Scatter of ``normalized`` against ``x``; fig1 adds the Lambda curve."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        dots = [r for r in rows if r.get("kind", "dot") == "dot"]
        ax.scatter([_f(r["x"]) for r in dots], [_f(r["normalized"]) for r in dots],
                   s=9, color="tab:red", zorder=3, label="q/p")
        curve = [r for r in rows if r.get("kind") == "lambda"]
        if curve:
            ax.plot([_f(r["x"]) for r in curve], [_f(r["normalized"]) for r in curve],
                    lw=0.7, color="0.35", label=r"$\Lambda$, even denominators")
            ax.legend(frameon=False)
        ax.axhline(0, color="0.8", lw=0.5, zorder=0)
        ax.set_xlim(0, 1)
        ax.set_xlabel("q/p")
        ax.set_ylabel(LABELS.get(which, "value"))
        if which == "fig3" and dots:
            ax.set_title(f"2k = {2 * dots[0]['k']}", fontsize=9)
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
        plt.close(fig)
    return path


def asymptotics(rows: list[dict], path) -> Path:
    """``sigma2/p_k^2`` along convergents with the ``Lambda`` level."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ks = [r["k"] for r in rows]
        ax.plot(ks, [_f(r["ratio"]) for r in rows], "o-", ms=3, lw=0.8, color="tab:red",
                label=r"$\sigma_2(q_k/p_k)/p_k^2$")
        if rows:
            ax.axhline(_f(rows[0]["lambda"]), color="0.35", lw=0.7, ls="--", label=r"$\Lambda(\theta)$")
        ax.set_xlabel("k")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
        plt.close(fig)
    return path
