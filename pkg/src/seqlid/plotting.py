"""Figures for experiment reports, written as PNG files."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from seqlid.harness import ExperimentReport  # noqa: E402
from seqlid.report import detail_run  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
    "svg.hashsalt": "seqlid",
}


def _save(fig, path: str) -> str:
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_sweep(report: ExperimentReport, train_size: int, path: str) -> str:
    """Accuracy and decisiveness against activation threshold, one line per file size."""
    thresholds = sorted(report.thresholds)
    fig, (ax_acc, ax_dec) = plt.subplots(1, 2, figsize=(7.0, 2.8), sharex=True)
    series = [(str(s), s) for s in report.spec.test_file_sizes] + [("all", None)]
    for label, size in series:
        runs = [report.run(train_size, t) for t in thresholds]
        acc = [100 * r.metrics(size).accuracy for r in runs]
        dec = [100 * r.metrics(size).decisiveness for r in runs]
        style = {"color": "k", "lw": 2} if size is None else {"lw": 1}
        ax_acc.plot(thresholds, acc, marker="o", ms=3, label=label, **style)
        ax_dec.plot(thresholds, dec, marker="o", ms=3, label=label, **style)
    ax_acc.set(xlabel="activation threshold", ylabel="accuracy (%)", ylim=(0, 101))
    ax_dec.set(xlabel="activation threshold", ylabel="decisiveness (%)", ylim=(0, 101))
    ax_dec.legend(title="test tokens", frameon=False)
    fig.suptitle(f"training size {train_size}")
    fig.tight_layout()
    return _save(fig, path)


def plot_convergence(report: ExperimentReport, train_size: int, path: str) -> str:
    """Distribution of tokens read before a definitive decision, per threshold."""
    fig, ax = plt.subplots(figsize=(4.5, 3.0))
    longest = max(report.spec.test_file_sizes)
    bins = np.arange(0.5, longest + 1.5)
    for t in sorted(report.thresholds):
        consumed = [o.tokens_consumed for o in report.run(train_size, t).outcomes if o.definitive]
        if consumed:
            ax.hist(consumed, bins=bins, histtype="step", label=f"{t:g}")
    ax.set(xlabel="tokens read", ylabel="definitive decisions")
    ax.legend(title="threshold", frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def plot_remaining(report: ExperimentReport, path: str) -> str:
    run = detail_run(report)
    hist = run.remaining.histogram
    sizes = list(hist)
    correct = [hist[s][0] for s in sizes]
    wrong = [hist[s][1] for s in sizes]
    fig, ax = plt.subplots(figsize=(4.5, 3.0))
    ax.bar(sizes, correct, color="0.4", label="correct")
    ax.bar(sizes, wrong, bottom=correct, color="tab:red", label="incorrect")
    ax.set(xlabel="categories remaining", ylabel="test files", title=f"threshold {run.threshold:g}")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def plot_confusion(report: ExperimentReport, path: str) -> str:
    run = detail_run(report)
    cats = report.categories
    matrix = run.confusion(cats)
    grid = np.array([[matrix[a][p] for p in cats] for a in cats], dtype=float)
    size = 1.5 + 0.3 * len(cats)
    fig, ax = plt.subplots(figsize=(size, size))
    ax.imshow(grid, cmap="Greys")
    ax.set_xticks(range(len(cats)), cats, rotation=90)
    ax.set_yticks(range(len(cats)), cats)
    ax.set(xlabel="assigned", ylabel="actual")
    for i in range(len(cats)):
        for j in range(len(cats)):
            if grid[i, j]:
                ax.text(j, i, int(grid[i, j]), ha="center", va="center", fontsize=6,
                        color="w" if grid[i, j] > grid.max() / 2 else "k")
    fig.tight_layout()
    return _save(fig, path)


def plot_report(report: ExperimentReport, out_dir: str) -> list[str]:
    """Write every figure for ``report`` into ``out_dir`` and return the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    with plt.rc_context(RC):
        for size in report.spec.train_sizes:
            paths.append(plot_sweep(report, size, os.path.join(out_dir, f"sweep_train{size}.png")))
            paths.append(plot_convergence(report, size, os.path.join(out_dir, f"convergence_train{size}.png")))
        paths.append(plot_remaining(report, os.path.join(out_dir, "remaining.png")))
        paths.append(plot_confusion(report, os.path.join(out_dir, "confusion.png")))
    return paths
