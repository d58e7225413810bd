import numpy as np
import pytest

from ddsopt import available_problems, builtin_problem, evaluate_barrier
from ddsopt.testproblems import CONSTRAINED_NAMES, RESIDUAL_BASES


def test_f1_examples():
    problem = builtin_problem("f1")
    assert problem.x0[0] == 1.0
    assert evaluate_barrier(problem, [0.0]).barrier == 0.0
    # global minimum value gamma*(x+2)*x**5 at the stationary point -5/3
    value = evaluate_barrier(problem, [-5.0 / 3.0]).barrier
    assert value == pytest.approx(-3125.0 * 1e-2 / 729.0, rel=1e-12)
    assert value == pytest.approx(-0.0428669, abs=1e-7)


def test_f2_examples():
    problem = builtin_problem("f2")
    assert problem.x0[0] == 1.0
    assert evaluate_barrier(problem, [1.0]).barrier == pytest.approx(4.0 / 9.0)
    assert evaluate_barrier(problem, [1.0 / 3.0]).barrier == pytest.approx(0.0, abs=1e-30)


def test_unknown_name_lists_registry():
    with pytest.raises(ValueError, match="registry"):
        builtin_problem("definitely_not_registered")
    with pytest.raises(ValueError, match="f1"):
        builtin_problem("definitely_not_registered")


def test_registry_minimum_content():
    names = available_problems()
    assert "f1" in names and "f2" in names
    assert len(RESIDUAL_BASES) >= 10
    assert sum(1 for n in names if n.startswith("hs")) >= 4
    for base in RESIDUAL_BASES:
        assert f"mw_{base}_smooth" in names
        assert f"mw_{base}_nonsmooth" in names


def test_smooth_nonsmooth_compositions():
    rng = np.random.default_rng(3)
    for base, (dim, residual, _) in RESIDUAL_BASES.items():
        smooth = builtin_problem(f"mw_{base}_smooth")
        nonsmooth = builtin_problem(f"mw_{base}_nonsmooth")
        x = rng.normal(scale=0.3, size=dim) + np.asarray(
            RESIDUAL_BASES[base][2])
        r = residual(x)
        assert smooth.objective(x) == pytest.approx(float(np.sum(r ** 2)))
        assert nonsmooth.objective(x) == pytest.approx(float(np.sum(np.abs(r))))


def test_rosenbrock_alias_and_values():
    problem = builtin_problem("rosenbrock2d")
    assert problem.dim == 2
    assert evaluate_barrier(problem, [1.0, 1.0]).barrier == 0.0
    assert evaluate_barrier(problem, [-1.2, 1.0]).barrier == pytest.approx(24.2)


def test_constrained_starts_feasible():
    for name in CONSTRAINED_NAMES:
        problem = builtin_problem(name)
        ev = evaluate_barrier(problem, problem.x0)
        assert ev.feasible, name


def test_known_constrained_optima():
    # spot checks against the classical optimal values
    cases = {
        "hs12": ([2.0, 3.0], -30.0),
        "hs30": ([1.0, 0.0, 0.0], 1.0),
        "hs35": ([4.0 / 3.0, 7.0 / 9.0, 4.0 / 9.0], 1.0 / 9.0),
        "hs36": ([20.0, 11.0, 15.0], -3300.0),
        "hs43": ([0.0, 1.0, 2.0, -1.0], -44.0),
    }
    for name, (x_star, f_star) in cases.items():
        problem = builtin_problem(name)
        ev = evaluate_barrier(problem, x_star)
        assert ev.feasible, name
        assert ev.barrier == pytest.approx(f_star, rel=1e-9), name


def test_sphere2d_bounds():
    problem = builtin_problem("sphere2d")
    assert evaluate_barrier(problem, [11.0, 0.0]).barrier == np.inf
    assert evaluate_barrier(problem, [3.0, 4.0]).barrier == 25.0
