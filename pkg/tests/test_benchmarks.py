import json

import numpy as np
import pytest

from ddsopt import (builtin_problem, evaluate_barrier, feasible_lhs_starts,
                    latin_hypercube_starts, manifest, suite, write_manifest)
from ddsopt.testproblems import RESIDUAL_BASES


def test_counterexamples_suite():
    instances = suite("counterexamples", 1)
    assert len(instances) == 2
    by_name = {inst.problem: inst for inst in instances}
    assert by_name["f1"].options == {"frame0": 0.5, "search": "none"}
    assert by_name["f2"].options == {"frame0": 1.0, "search": "quadratic"}
    assert by_name["f1"].start == (1.0,)
    assert by_name["f2"].start == (1.0,)


def test_suite_cross_product():
    instances = suite("morewild_smooth", 20)
    assert len(instances) == 20 * len(RESIDUAL_BASES)
    seeds = {inst.seed for inst in instances}
    assert seeds == set(range(20))


def test_constrained_suite_feasible_starts():
    for inst in suite("constrained", 2):
        problem = inst.make_problem()
        assert evaluate_barrier(problem, np.asarray(inst.start)).feasible


def test_unknown_suite():
    with pytest.raises(ValueError, match="unknown suite"):
        suite("everything", 1)
    with pytest.raises(ValueError):
        suite("constrained", 0)


def test_suite_enumeration_is_stable():
    a = [(i.problem, i.seed) for i in suite("morewild_nonsmooth", 3)]
    b = [(i.problem, i.seed) for i in suite("morewild_nonsmooth", 3)]
    assert a == b


# -- Latin hypercube sampling ------------------------------------------------------

def test_lhs_stratification_1d():
    points = latin_hypercube_starts([0.0], [10.0], 5, seed=0)
    strata = sorted(int(p[0] // 2.0) for p in points)
    assert strata == [0, 1, 2, 3, 4]


def test_lhs_single_point_and_bounds():
    points = latin_hypercube_starts([-1.0, 2.0], [1.0, 4.0], 1, seed=3)
    assert points.shape == (1, 2)
    assert np.all(points >= [-1.0, 2.0]) and np.all(points <= [1.0, 4.0])


def test_lhs_determinism():
    a = latin_hypercube_starts([0.0, 0.0], [1.0, 1.0], 7, seed=42)
    b = latin_hypercube_starts([0.0, 0.0], [1.0, 1.0], 7, seed=42)
    assert np.array_equal(a, b)
    c = latin_hypercube_starts([0.0, 0.0], [1.0, 1.0], 7, seed=43)
    assert not np.array_equal(a, c)


def test_lhs_requires_finite_box():
    with pytest.raises(ValueError):
        latin_hypercube_starts([0.0], [np.inf], 3, seed=0)
    with pytest.raises(ValueError):
        latin_hypercube_starts([1.0], [0.0], 3, seed=0)
    with pytest.raises(ValueError):
        latin_hypercube_starts([0.0], [1.0], 0, seed=0)


def test_feasible_lhs_starts():
    problem = builtin_problem("hs30")
    starts = feasible_lhs_starts(problem, 6, seed=1)
    assert starts.shape == (6, 3)
    for x in starts:
        assert evaluate_barrier(problem, x).feasible


def test_feasible_lhs_requires_bounds():
    with pytest.raises(ValueError):
        feasible_lhs_starts(builtin_problem("f1"), 3, seed=0)


# -- manifests ----------------------------------------------------------------------

def test_manifest_contents(tmp_path):
    instances = suite("constrained", 1)
    entries = manifest(instances)
    assert len(entries) == len(instances)
    first = entries[0]
    for key in ("problem", "seed", "variant", "n", "m", "lower", "upper", "x0"):
        assert key in first
    path = tmp_path / "manifest.json"
    write_manifest(instances, path)
    loaded = json.loads(path.read_text())
    assert loaded == entries
