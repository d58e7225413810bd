import numpy as np
import pytest

from ddsopt import (Problem, build_quadratic_model, build_quadratic_models,
                    minimize_model, n_model_points, quadratic_search,
                    select_fit_points)


def poised_sample(center, radius, dim):
    points = [np.zeros(dim)]
    for i in range(dim):
        points.append(np.eye(dim)[i])
        points.append(-np.eye(dim)[i])
    for i in range(dim):
        for j in range(i + 1, dim):
            points.append(np.eye(dim)[i] + np.eye(dim)[j])
    pts = np.array(points)[: n_model_points(dim)]
    return np.asarray(center) + radius * pts


def random_quadratic(rng, dim):
    a = rng.standard_normal((dim, dim))
    hessian = a + a.T
    gradient = rng.standard_normal(dim)
    constant = float(rng.standard_normal())

    def value(x):
        d = np.asarray(x, dtype=float)
        return constant + gradient @ d + 0.5 * d @ hessian @ d

    return value, constant, gradient, hessian


# -- fit-point selection -------------------------------------------------------

def test_select_widens_until_sufficient():
    points = np.array([[1.0], [-1.5], [3.5]])
    usable = np.ones(3, dtype=bool)
    sel = select_fit_points(points, usable, [0.0], 1.0, needed=3)
    assert sorted(sel.tolist()) == [0, 1, 2]  # required the 4*frame region


def test_select_returns_first_sufficient_region():
    points = np.array([[0.5], [1.0], [3.5]])
    sel = select_fit_points(points, np.ones(3, bool), [0.0], 1.0, needed=2)
    assert sorted(sel.tolist()) == [0, 1]  # 2*frame region already enough


def test_select_empty_when_everything_far():
    points = np.array([[100.0], [-50.0]])
    sel = select_fit_points(points, np.ones(2, bool), [0.0], 1.0, needed=3)
    assert sel.size == 0


def test_select_keeps_surplus():
    rng = np.random.default_rng(1)
    points = rng.uniform(-1.9, 1.9, size=(10, 2))
    sel = select_fit_points(points, np.ones(10, bool), [0.0, 0.0], 1.0,
                            needed=6)
    assert sel.size == 10


def test_select_respects_usable_mask():
    points = np.array([[0.1], [0.2], [0.3]])
    usable = np.array([True, False, True])
    sel = select_fit_points(points, usable, [0.0], 1.0, needed=2)
    assert sorted(sel.tolist()) == [0, 2]


# -- model construction ---------------------------------------------------------

def test_fit_shifted_parabola():
    points = np.array([[0.0], [1.0], [2.0]])
    values = (points[:, 0] - 1.0 / 3.0) ** 2
    model = build_quadratic_model(points, values, center=np.array([1.0]))
    for p, v in zip(points, values):
        assert model.value(p) == pytest.approx(v, abs=1e-12)
    minimizer = minimize_model(model, box_center=np.array([0.5]),
                               box_radius=8.5)
    assert minimizer[0] == pytest.approx(1.0 / 3.0, abs=1e-8)


def test_fit_constant_data():
    points = poised_sample([0.0, 0.0], 1.0, 2)
    model = build_quadratic_model(points, np.full(len(points), 5.0),
                                  center=np.zeros(2))
    assert model.constant == pytest.approx(5.0, abs=1e-12)
    assert np.abs(model.gradient).max() <= 1e-10
    assert np.abs(model.hessian).max() <= 1e-10


@pytest.mark.parametrize("dim", [1, 2, 3, 5])
def test_refit_recovers_random_quadratic(dim):
    rng = np.random.default_rng(dim)
    value, constant, gradient, hessian = random_quadratic(rng, dim)
    center = rng.standard_normal(dim)
    points = poised_sample(center, 0.7, dim)
    model = build_quadratic_model(points, [value(p) for p in points], center)
    scale = max(1.0, np.abs(hessian).max(), np.abs(gradient).max())
    # recentre the generator at the fit center for comparison
    g_at_center = gradient + hessian @ center
    c_at_center = value(center)
    assert abs(model.constant - c_at_center) <= 1e-8 * max(1, abs(c_at_center))
    assert np.abs(model.gradient - g_at_center).max() <= 1e-8 * scale
    assert np.abs(model.hessian - hessian).max() <= 1e-8 * scale


def test_interpolation_reproduces_data_when_determined():
    rng = np.random.default_rng(11)
    points = poised_sample([0.3, -0.2], 0.5, 2)
    values = rng.standard_normal(len(points))
    model = build_quadratic_model(points, values, center=np.array([0.3, -0.2]))
    for p, v in zip(points, values):
        assert abs(model.value(p) - v) <= 1e-8 * max(1.0, abs(v))


def test_model_gradient_matches_finite_differences():
    rng = np.random.default_rng(4)
    value, *_ = random_quadratic(rng, 3)
    center = np.zeros(3)
    points = poised_sample(center, 1.0, 3)
    model = build_quadratic_model(points, [value(p) for p in points], center)
    h = 1e-5
    for _ in range(10):
        x = rng.standard_normal(3)
        grad = model.grad(x)
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            fd = (model.value(x + e) - model.value(x - e)) / (2 * h)
            assert fd == pytest.approx(grad[i], rel=1e-6, abs=1e-6)


def test_insufficient_points_gives_no_model():
    points = np.array([[0.0], [1.0]])
    assert build_quadratic_model(points, [0.0, 1.0], np.array([0.0])) is None


def test_degenerate_geometry_gives_no_model():
    # six collinear points in 2-d cannot determine a quadratic
    t = np.linspace(0.0, 1.0, 6)
    points = np.column_stack([t, 2.0 * t])
    assert build_quadratic_model(points, t ** 2, np.zeros(2)) is None


def test_identical_points_give_no_model():
    points = np.zeros((6, 2))
    assert build_quadratic_model(points, np.zeros(6), np.zeros(2)) is None


def test_multi_output_fit_shares_geometry():
    points = poised_sample([0.0, 0.0], 1.0, 2)
    values = np.column_stack([
        points[:, 0] ** 2 + points[:, 1] ** 2,
        1.0 - points[:, 0],
    ])
    models = build_quadratic_models(points, values, np.zeros(2))
    assert len(models) == 2
    assert models[1].value([1.0, 0.0]) == pytest.approx(0.0, abs=1e-10)


# -- model minimization ----------------------------------------------------------

def test_minimize_linear_model_hits_boundary():
    model = build_quadratic_model(
        np.array([[-1.0], [0.0], [1.0]]), np.array([-1.0, 0.0, 1.0]),
        np.array([0.0]))
    x = minimize_model(model, box_center=np.zeros(1), box_radius=1.0)
    assert x[0] == pytest.approx(-1.0, abs=1e-12)


def test_minimize_constrained_kkt_point():
    points = poised_sample([0.0, 0.0], 2.0, 2)
    values = np.column_stack([
        points[:, 0] ** 2 + points[:, 1] ** 2,
        1.0 - points[:, 0],
    ])
    objective, constraint = build_quadratic_models(points, values, np.zeros(2))
    x = minimize_model(objective, [constraint], box_center=np.zeros(2),
                       box_radius=10.0)
    assert np.abs(x - np.array([1.0, 0.0])).max() <= 1e-6


def test_minimize_never_leaves_box():
    rng = np.random.default_rng(5)
    for _ in range(20):
        value, *_ = random_quadratic(rng, 2)
        center = rng.standard_normal(2)
        points = poised_sample(center, 1.0, 2)
        model = build_quadratic_model(points, [value(p) for p in points],
                                      center)
        box_center = rng.standard_normal(2)
        radius = float(rng.uniform(0.1, 2.0))
        x = minimize_model(model, box_center=box_center, box_radius=radius)
        assert np.all(x >= box_center - radius - 1e-15)
        assert np.all(x <= box_center + radius + 1e-15)


def test_minimize_escapes_saddle_center():
    points = poised_sample([0.0, 0.0], 1.0, 2)
    values = points[:, 0] ** 2 - points[:, 1] ** 2
    model = build_quadratic_model(points, values, np.zeros(2))
    x = minimize_model(model, box_center=np.zeros(2), box_radius=1.0)
    assert model.value(x) < model.value(np.zeros(2)) - 0.5


def test_minimize_budget_guard():
    model = build_quadratic_model(
        np.array([[-1.0], [0.0], [1.0]]), np.array([1.0, 0.0, 1.0]),
        np.array([0.0]))
    x = minimize_model(model, box_center=np.array([0.9]), box_radius=1.0,
                       budget=1)
    assert -0.1 <= x[0] <= 1.9  # still inside the box even with one gradient
    with pytest.raises(ValueError):
        minimize_model(model, box_center=np.zeros(1), box_radius=1.0,
                       budget=0)


# -- search-step candidate --------------------------------------------------------

def shifted_parabola_cache():
    points = np.array([[0.0], [1.0], [2.0]])
    values = (points[:, 0] - 1.0 / 3.0) ** 2
    return points, values


def test_quadratic_search_predicts_parabola_minimum():
    points, values = shifted_parabola_cache()
    cand = quadratic_search(points, values, None, np.ones(3, bool),
                            center=np.array([1.0]), frame=1.0)
    assert cand[0] == pytest.approx(1.0 / 3.0, abs=1e-8)


def test_quadratic_search_insufficient_cache():
    points = np.array([[0.0], [1.0]])
    cand = quadratic_search(points, np.array([0.0, 1.0]), None,
                            np.ones(2, bool), center=np.array([0.0]),
                            frame=1.0)
    assert cand is None


def test_quadratic_search_clips_to_bounds():
    points, values = shifted_parabola_cache()
    problem = Problem("boxed", 1, lambda x: (x[0] - 1.0 / 3.0) ** 2,
                      lower=[0.5], upper=[2.0], x0=[1.0])
    cand = quadratic_search(points, values, None, np.ones(3, bool),
                            center=np.array([1.0]), frame=1.0,
                            problem=problem)
    assert cand[0] == pytest.approx(0.5, abs=1e-12)


def test_quadratic_search_recovers_constrained_minimizer():
    # objective and constraint are exact quadratics; with a poised sample the
    # candidate must match the true constrained minimizer (1, 0)
    points = poised_sample([0.5, 0.5], 2.0, 2)
    objective = points[:, 0] ** 2 + points[:, 1] ** 2
    constraint = (1.0 - points[:, 0])[:, None]
    cand = quadratic_search(points, objective, constraint,
                            np.ones(len(points), bool),
                            center=np.array([0.5, 0.5]), frame=2.0)
    assert np.abs(cand - np.array([1.0, 0.0])).max() <= 1e-6


def test_quadratic_search_ignores_unusable_points():
    points, values = shifted_parabola_cache()
    usable = np.array([True, True, False])
    cand = quadratic_search(points, values, None, usable,
                            center=np.array([1.0]), frame=1.0)
    assert cand is None
