"""Figures written next to CLI reports.  Uses the Agg backend; nothing is shown."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bound import SweepPoint, iid_product_bound, binomial_bound  # noqa: E402

_RC = {
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
    "svg.hashsalt": "qfid",
}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated runs byte-identical
    meta = {"Software": None} if path.suffix.lower() == ".png" else {"Date": None}
    fig.savefig(path, metadata=meta)
    plt.close(fig)
    return path


def _positive(values: Sequence[float], floor: float = 1e-300) -> list[float]:
    return [max(v, floor) for v in values]


def plot_sweep(points: Sequence[SweepPoint], alpha: float, p: float, path: str | Path) -> Path:
    ns = [pt.n for pt in points]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.semilogy(ns, _positive([pt.epsilon for pt in points]), "o-", label="binomial tail")
        ax.semilogy(ns, _positive([pt.asymptotic for pt in points]), "s--", label=r"$p^{t+1}2^n$")
        ax.semilogy(ns, _positive([pt.chain for pt in points]), ":", label=r"$p(2p^\alpha)^n$")
        ax.set_xlabel("code length n")
        ax.set_ylabel(r"infidelity bound $\epsilon$")
        ax.set_title(f"p = {p:g}, t = floor({alpha:g} n)")
        ax.legend()
        return _save(fig, path)


def plot_bound_curve(n: int, t: int, p_max: float, path: str | Path, num: int = 60) -> Path:
    import numpy as np

    ps = np.logspace(-5, np.log10(max(p_max, 1e-4)), num)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.loglog(ps, _positive([binomial_bound(n, t, float(p)).epsilon for p in ps]), label="binomial tail")
        ax.loglog(ps, _positive([iid_product_bound(n, t, float(p)) for p in ps]), "--", label="product form")
        ax.set_xlabel("error mass p")
        ax.set_ylabel(r"infidelity bound $\epsilon$")
        ax.set_title(f"n = {n}, t = {t}")
        ax.legend()
        return _save(fig, path)


def plot_branches(report, path: str | Path) -> Path:
    """Per-syndrome probability and conditional fidelity of a simulation."""
    labels = ["".join(map(str, b.syndrome)) for b in report.branches]
    probs = [b.probability for b in report.branches]
    fids = [b.fidelity if b.fidelity is not None else float("nan") for b in report.branches]
    x = range(len(labels))
    with plt.rc_context(_RC):
        fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(max(6, 0.25 * len(labels)), 5), sharex=True)
        ax0.bar(x, _positive(probs), color="tab:blue")
        ax0.set_yscale("log")
        ax0.set_ylabel("P(syndrome)")
        ax0.set_title(f"{report.code}  average F = {report.average_fidelity:.6f}")
        ax1.plot(x, fids, "o", color="tab:green")
        for label, eps in report.epsilons.items():
            ax1.axhline(1 - eps, ls="--", lw=0.8, label=f"1 - eps ({label})")
        ax1.set_ylabel("conditional fidelity")
        ax1.set_xticks(list(x))
        ax1.set_xticklabels(labels, rotation=90, fontsize=6)
        ax1.legend(fontsize=7)
        return _save(fig, path)
