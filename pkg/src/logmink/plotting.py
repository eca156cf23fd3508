"""Figures for sweep and solver reports (written to files, Agg backend)."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_gap_histogram(gaps, path, title=None, bins=40):
    """Histogram of inequality gaps; the zero line marks equality."""
    gaps = np.asarray(gaps, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(gaps, bins=bins, color="tab:blue", alpha=0.8)
    ax.axvline(0.0, color="k", lw=1, ls="--")
    ax.set_xlabel("gap = lhs - rhs")
    ax.set_ylabel("instances")
    ax.set_title(title or f"{len(gaps)} instances, min gap {gaps.min():.3g}")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_solver_trace(trace, path, title=None):
    """Phi (shifted by its final value) and gradient norm per accepted step."""
    trace = np.asarray(trace, dtype=float)
    it, phi, grad = trace[:, 0], trace[:, 1], trace[:, 2]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    excess = phi - phi[-1]
    ax1.semilogy(it[excess > 0], excess[excess > 0], color="tab:blue")
    ax1.set_xlabel("iteration")
    ax1.set_ylabel("phi - final phi")
    ax2.semilogy(it, np.maximum(grad, 1e-300), color="tab:red")
    ax2.set_xlabel("iteration")
    ax2.set_ylabel("gradient norm")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
