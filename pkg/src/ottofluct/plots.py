"""Figure rendering for the CLI: every delimited output can be accompanied
by a matplotlib figure written next to it."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "sweep_figure",
    "scan_figure",
    "thermalization_figure",
    "pmf_figure",
    "samples_figure",
]


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def sweep_figure(path, variable: str, values, columns: dict[str, np.ndarray]):
    """One curve per requested output quantity against the sweep variable."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, ys in columns.items():
        ax.plot(values, ys, label=name, lw=1.4)
    ax.set_xlabel(variable)
    ax.axhline(0.0, color="0.7", lw=0.6, zorder=0)
    ax.legend(fontsize=8)
    ax.set_title("parameter sweep")
    return _finish(fig, path)


def scan_figure(path, scan):
    """Violation mask over the occupation grid, with the SNR underneath."""
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.8))
    extent = [scan.n_b[0], scan.n_b[-1], scan.n_a[0], scan.n_a[-1]]
    im = axes[0].imshow(
        scan.snr - scan.half_sigma, origin="lower", extent=extent, aspect="auto", cmap="RdBu_r"
    )
    fig.colorbar(im, ax=axes[0], label="snr - sigma/2")
    axes[0].set_xlabel("n_b")
    axes[0].set_ylabel("n_a")
    axes[1].imshow(
        scan.violated, origin="lower", extent=extent, aspect="auto", cmap="Greys"
    )
    axes[1].set_xlabel("n_b")
    axes[1].set_ylabel("n_a")
    axes[1].set_title(f"violation area fraction: {scan.area_fraction:.4f}")
    return _finish(fig, path)


def thermalization_figure(path, n_b, curves: dict[str, np.ndarray]):
    """Work signal-to-noise ratio against the cold occupation for each contact time."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, snr in curves.items():
        ax.plot(n_b, snr, label=label, lw=1.4)
    ax.set_xlabel("n_b")
    ax.set_ylabel("snr_w")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def pmf_figure(path, outcomes):
    """Stem plot of the work/heat law over the quantum index."""
    ns = [o.n for o in outcomes]
    ps = [o.probability for o in outcomes]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(ns, ps, width=0.8, color="tab:blue")
    ax.set_xlabel("n (heat quanta)")
    ax.set_ylabel("probability")
    return _finish(fig, path)


def samples_figure(path, batch, n_lo: int = -20, n_hi: int = 20):
    """Empirical histogram of sampled indices against the exact law."""
    ns = np.arange(n_lo, n_hi + 1)
    exact = batch.pmf.prob(ns)
    counts = np.array([(batch.n == n).sum() for n in ns], dtype=float) / len(batch)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(ns, counts, width=0.8, color="tab:blue", alpha=0.6, label="sampled")
    ax.plot(ns, exact, "k.-", lw=1.0, ms=4, label="exact")
    ax.set_xlabel("n (heat quanta)")
    ax.set_ylabel("probability")
    ax.legend(fontsize=8)
    return _finish(fig, path)
