"""Matplotlib figures for distribution and comparison reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import ComparisonReport, ReconcileReport  # noqa: E402

_RC = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    # fixed metadata keeps re-rendered files byte-stable
    "svg.hashsalt": "nlfg",
}


_STRIP_METADATA = {".png": {"Software": None}, ".pdf": {"CreationDate": None},
                   ".svg": {"Date": None}}


def _save(fig, path):
    suffix = str(path)[str(path).rfind("."):].lower()
    fig.savefig(path, bbox_inches="tight", metadata=_STRIP_METADATA.get(suffix))
    plt.close(fig)


def plot_distribution(report: ReconcileReport, path, max_bars: int = 64):
    """Measured vs closed-form count for each output value.

    With more than ``max_bars`` values the bars are aggregated by kappa
    (mean count per word).
    """
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(max(4.0, min(12.0, 0.35 * len(report.rows) + 2)), 3.2))
        rows = report.rows
        if len(rows) > max_bars:
            kappas = sorted({r.kappa for r in rows})
            labels = [f"k={k}" for k in kappas]
            meas = [np.mean([r.measured for r in rows if r.kappa == k]) for k in kappas]
            orac = [np.mean([r.oracle for r in rows if r.kappa == k]) for k in kappas]
        else:
            labels = [r.entries for r in rows]
            meas = [r.measured for r in rows]
            orac = [r.oracle for r in rows]
        x = np.arange(len(labels))
        ax.bar(x - 0.2, meas, width=0.4, label="measured", color="#4477aa")
        ax.bar(x + 0.2, orac, width=0.4, label="closed form", color="#ee6677")
        period = report.params.period
        ax.axhline(period / report.params.q**report.params.r, color="k", lw=0.8, ls="--",
                   label="balanced")
        ax.set_xticks(x)
        ax.set_xticklabels(labels, rotation=90 if len(labels) > 8 else 0)
        ax.set_ylabel("occurrences per period")
        p = report.params
        ax.set_title(f"q={p.q} r={p.r} L={p.L} m={p.m} ({report.mode})")
        ax.legend(frameon=False)
        _save(fig, path)


def plot_comparison(report: ComparisonReport, path):
    """Per-kappa occurrence counts of one word under both schemes."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        kappas = [row.kappa for row in report.rows]
        x = np.arange(len(kappas))
        ax.bar(x - 0.2, [row.proposed_oracle for row in report.rows], width=0.4,
               label="field product", color="#228833")
        ax.bar(x + 0.2, [row.elementwise_oracle for row in report.rows], width=0.4,
               label="element-wise", color="#ccbb44")
        p = report.params
        ax.axhline(p.period / p.q**p.r, color="k", lw=0.8, ls="--", label="balanced")
        ax.set_xticks(x)
        ax.set_xticklabels([str(k) for k in kappas])
        ax.set_xlabel("nonzero entries of the word (kappa)")
        ax.set_ylabel("occurrences per period")
        ax.set_title(f"q={p.q} r={p.r} L={p.L} m={p.m}")
        ax.legend(frameon=False)
        _save(fig, path)
