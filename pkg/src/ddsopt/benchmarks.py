"""Benchmark suites and multi-seed instance generation.

An instance is one (problem, seed, variant) triple; seeds perturb only the
algorithm's direction generation, not the start points, except where a suite
explicitly asks for sampled starts.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .testproblems import (CONSTRAINED_NAMES, RESIDUAL_BASES, builtin_problem)

SUITE_NAMES = ("counterexamples", "morewild_smooth", "morewild_nonsmooth",
               "constrained")


@dataclass
class Instance:
    problem: str
    seed: int
    variant: str = "raw"
    start: tuple = None
    options: dict = field(default_factory=dict)

    def make_problem(self):
        return builtin_problem(self.problem)


def _with_start(instance):
    problem = instance.make_problem()
    instance.start = tuple(float(v) for v in problem.x0)
    return instance


def suite(name, seeds):
    """Instances of a registered suite over ``seeds`` consecutive seeds."""
    if seeds < 1:
        raise ValueError("need at least one seed")
    if name == "counterexamples":
        instances = []
        for seed in range(seeds):
            instances.append(Instance("f1", seed, "raw",
                                      options={"frame0": 0.5, "search": "none"}))
            instances.append(Instance("f2", seed, "raw",
                                      options={"frame0": 1.0,
                                               "search": "quadratic"}))
        return [_with_start(inst) for inst in instances]
    if name in ("morewild_smooth", "morewild_nonsmooth"):
        composition = name.split("_", 1)[1]
        return [
            _with_start(Instance(f"mw_{base}_{composition}", seed, composition))
            for base in RESIDUAL_BASES for seed in range(seeds)
        ]
    if name == "constrained":
        instances = []
        for problem_name in CONSTRAINED_NAMES:
            # construction re-checks that the published start is feasible
            builtin_problem(problem_name)
            for seed in range(seeds):
                instances.append(_with_start(
                    Instance(problem_name, seed, "constrained")))
        return instances
    raise ValueError(f"unknown suite {name!r}; suites: {', '.join(SUITE_NAMES)}")


def latin_hypercube_starts(lower, upper, count, seed):
    """``count`` stratified sample points in the box [lower, upper].

    Each coordinate gets exactly one point per axis stratum; the stratum
    order and the position inside each stratum are drawn from ``seed``.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != upper.shape or lower.ndim != 1:
        raise ValueError("bounds must be 1-d arrays of equal length")
    if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
        raise ValueError("Latin hypercube sampling needs finite bounds")
    if np.any(lower > upper):
        raise ValueError("lower bounds must not exceed upper bounds")
    if count < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    n = lower.size
    u = np.empty((count, n))
    for j in range(n):
        strata = rng.permutation(count)
        u[:, j] = (strata + rng.random(count)) / count
    return lower + u * (upper - lower)


def feasible_lhs_starts(problem, count, seed, max_batches=200):
    """Rejection-sampled Latin hypercube starts inside the feasible region."""
    from .problem import evaluate_barrier
    if problem.lower is None or problem.upper is None:
        raise ValueError("feasible sampling needs finite bounds")
    rng_seed = np.random.default_rng(seed)
    accepted = []
    for batch in range(max_batches):
        batch_seed = int(rng_seed.integers(0, 2 ** 31))
        for x in latin_hypercube_starts(problem.lower, problem.upper, count,
                                        batch_seed):
            if evaluate_barrier(problem, x).feasible:
                accepted.append(x)
                if len(accepted) == count:
                    return np.array(accepted)
    raise RuntimeError(
        f"could not find {count} feasible starts in {max_batches} batches")


def manifest(instances):
    """JSON-ready description of a list of instances."""
    entries = []
    for inst in instances:
        problem = inst.make_problem()
        entries.append({
            "problem": inst.problem,
            "seed": inst.seed,
            "variant": inst.variant,
            "n": problem.dim,
            "m": problem.n_constraints,
            "lower": None if problem.lower is None else list(problem.lower),
            "upper": None if problem.upper is None else list(problem.upper),
            "x0": list(inst.start) if inst.start else list(problem.x0),
            "options": inst.options,
        })
    return entries


def write_manifest(instances, path):
    with open(path, "w") as handle:
        json.dump(manifest(instances), handle, indent=2)
    return path
