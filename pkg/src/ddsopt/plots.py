"""Matplotlib rendering of run and profile reports to files."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_profiles(curves, path, title=None):
    """Render one or more profile curves (with axes and legend) to ``path``."""
    if not isinstance(curves, dict):
        curves = {"profile": curves}
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    tau_acc = None
    for label, curve in sorted(curves.items()):
        ax.step(curve.alphas, curve.fractions, where="post", label=label)
        tau_acc = curve.tau_acc
    ax.set_xlabel(r"Groups of $(n+1)$ evaluations")
    ax.set_ylabel("Fraction of instances solved")
    ax.set_ylim(-0.02, 1.02)
    if title is None and tau_acc is not None and np.isfinite(tau_acc):
        title = f"Data profiles, accuracy {tau_acc:g}"
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def render_history(history, path, title=None):
    """Render the best-so-far value of a run against evaluations."""
    trace = history.incumbent_trace()
    evals = np.arange(1, trace.size + 1)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    label = history.metadata.get("algorithm", "run")
    ax.step(evals, trace, where="post", label=label)
    ax.set_xlabel("Evaluations")
    ax.set_ylabel("Best objective value")
    if np.all(trace > 0):
        ax.set_yscale("log")
    if title is None:
        title = history.metadata.get("problem", "")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
