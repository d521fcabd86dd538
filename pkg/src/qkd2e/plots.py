"""File-output figure renderers for CLI reports (opt-in via --plot)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def wigner_sweep_figure(sweep_rows: list[dict], thresholds: dict, w_quantum: float, path) -> None:
    """W(eta) line with the detection floor band and threshold markers."""
    etas = np.array([r["eta"] for r in sweep_rows])
    ws = np.array([r["W"] for r in sweep_rows])
    floor = sweep_rows[0]["stderr"] if sweep_rows else 0.0

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(etas, ws, marker="o", markersize=3, label="W(eta)")
    ax.axhline(w_quantum, color="gray", lw=0.8)
    ax.axhspan(w_quantum - floor, w_quantum + floor, color="gray", alpha=0.25,
               label="undetectable band")
    for name, eta_max in thresholds.items():
        ax.axvline(eta_max, ls="--", lw=1,
                   label=f"max undetected ({name}): {eta_max:.3f}")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("intercepted fraction eta")
    ax.set_ylabel("W")
    ax.set_title("Wigner value under partial interception")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def attack_table_figure(rows: list[dict], path) -> None:
    """Grouped bars of induced QBER by strategy and channel, split by model."""
    labels = sorted({(r["strategy"], r["channel"]) for r in rows})
    x = np.arange(len(labels))
    width = 0.38
    fig, ax = plt.subplots(figsize=(7, 4))
    for off, model in zip((-width / 2, width / 2), ("cascade", "physical")):
        vals = []
        for strat, chan in labels:
            match = [r for r in rows
                     if r["strategy"] == strat and r["channel"] == chan and r["model"] == model]
            vals.append(match[0]["q_AB"] if match else np.nan)
        ax.bar(x + off, vals, width, label=model)
    ax.set_xticks(x)
    ax.set_xticklabels([f"{s}\n{c}" for s, c in labels], fontsize=8)
    ax.set_ylabel("induced QBER")
    ax.set_title("Induced Alice-Bob error by attack and accounting")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def so4_ratio_figure(report: dict, path) -> None:
    """Per-arm induced error bars with the headline ratio in the title."""
    names = ["single", "double"]
    vals = [report["e_single"], report["e_double"]]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(names, vals, color=["tab:blue", "tab:orange"])
    base = report.get("qubit_rotation_baseline")
    if base:
        ax.axhline(base["e_single_pol"], ls=":", color="gray",
                   label="single-qubit rotation baseline")
        ax.legend(fontsize=8)
    lo, hi = report["ratio_ci"]
    ax.set_ylabel("induced QBER")
    ax.set_title(f"random-rotation attack: ratio {report['ratio']:.3f} "
                 f"[{lo:.3f}, {hi:.3f}]")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
