"""Data profiles: convergence-test bookkeeping over groups of evaluations.

An instance counts as solved at accuracy ``tau_acc`` once its best value has
closed a fraction (1 - tau_acc) of the gap between the start value and the
instance-based reference value (the lowest value any compared run found).
Profiles report the fraction of instances solved within ``alpha`` groups of
(n + 1) evaluations.
"""

import csv
from dataclasses import dataclass

import numpy as np


@dataclass
class ProfileCurve:
    tau_acc: float
    alphas: np.ndarray
    fractions: np.ndarray

    def __post_init__(self):
        self.alphas = np.asarray(self.alphas, dtype=float)
        self.fractions = np.asarray(self.fractions, dtype=float)


def best_known(histories):
    """Lowest finite barrier value over all supplied histories, else None."""
    if not histories:
        raise ValueError("need at least one history")
    best = np.inf
    for history in histories:
        value = history.best_value()
        if value is not None and value < best:
            best = value
    return None if not np.isfinite(best) else float(best)


def evals_to_solve(history, f0, fstar, tau_acc):
    """Smallest 1-based N whose best-so-far value meets the accuracy test.

    Returns None when the history never reaches
    ``fstar + tau_acc * (f0 - fstar)``. A zero gap (f0 == fstar) counts as
    solved at the first evaluation.
    """
    if not 0.0 < tau_acc < 1.0:
        raise ValueError("tau_acc must lie strictly between 0 and 1")
    if f0 < fstar:
        raise ValueError("start value must not be below the reference value")
    if f0 == fstar:
        return 1
    trace = history.incumbent_trace() if hasattr(history, "incumbent_trace") \
        else np.asarray(history, dtype=float)
    threshold = fstar + tau_acc * (f0 - fstar)
    hits = np.flatnonzero(trace <= threshold)
    return int(hits[0]) + 1 if hits.size else None


def default_alpha_grid(budget, dim):
    groups = max(1, int(budget // (dim + 1)))
    return np.arange(1, groups + 1, dtype=float)


def data_profile(solve_counts, dims, alphas, tau_acc):
    """Fraction of instances solved within alpha groups of (n+1) evaluations.

    ``solve_counts`` holds per-instance evaluation counts (None = unsolved)
    and ``dims`` the matching problem dimensions.
    """
    alphas = np.asarray(alphas, dtype=float)
    fractions = np.zeros_like(alphas)
    total = len(solve_counts)
    if total:
        for count, dim in zip(solve_counts, dims):
            if count is None:
                continue
            fractions += count <= alphas * (dim + 1)
        fractions /= total
    return ProfileCurve(tau_acc=tau_acc, alphas=alphas, fractions=fractions)


def _instance_key(history):
    meta = history.metadata
    return (meta.get("problem"), meta.get("seed"), meta.get("variant", "raw"))


def compute_profiles(histories, tau_acc, alphas=None):
    """Per-algorithm profile curves from a pool of histories.

    Histories are grouped into instances by (problem, seed, variant); the
    reference value of each instance is the lowest value any algorithm found
    on it. Instances where no run ever found a finite value are excluded.
    """
    groups = {}
    for history in histories:
        groups.setdefault(_instance_key(history), []).append(history)
    if alphas is None:
        max_groups = 1
        for history in histories:
            budget = history.metadata.get("budget", len(history.records))
            dim = history.dim or 1
            max_groups = max(max_groups, int(budget // (dim + 1)))
        alphas = np.arange(1, max_groups + 1, dtype=float)
    solves = {}
    for key, group in groups.items():
        fstar = best_known(group)
        if fstar is None:
            continue  # unsolvable instance, excluded
        for history in group:
            algorithm = history.metadata.get("algorithm", "unknown")
            f0 = history.records[0].barrier if history.records else np.inf
            count = evals_to_solve(history, f0, fstar, tau_acc)
            solves.setdefault(algorithm, []).append((count, history.dim or 1))
    curves = {}
    for algorithm, pairs in sorted(solves.items()):
        counts = [c for c, _ in pairs]
        dims = [d for _, d in pairs]
        curves[algorithm] = data_profile(counts, dims, alphas, tau_acc)
    return curves


def write_profile_csv(curve, path):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["alpha", "fraction"])
        for alpha, fraction in zip(curve.alphas, curve.fractions):
            writer.writerow([format(alpha, ".17g"), format(fraction, ".17g")])
    return path


def read_profile_csv(path, tau_acc=float("nan")):
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != ["alpha", "fraction"]:
            raise ValueError(f"{path}: not a profile CSV")
        rows = [(float(a), float(f)) for a, f in reader]
    alphas = np.array([r[0] for r in rows])
    fractions = np.array([r[1] for r in rows])
    return ProfileCurve(tau_acc=tau_acc, alphas=alphas, fractions=fractions)
