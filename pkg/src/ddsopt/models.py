"""Quadratic models of cached evaluations and the model-based search step.

Models are fit on the monomial basis {1, x_i, x_i x_j} centered at the fit
center and scaled by the fit radius. Determined systems interpolate;
overdetermined ones are solved in the least-squares sense, with rank
deficiency resolved by the minimum-coefficient-norm solution. Fits whose
scaled basis matrix has an estimated condition number above ``COND_LIMIT``
are rejected outright.
"""

from dataclasses import dataclass

import numpy as np

COND_LIMIT = 1e12
DEFAULT_SUBSOLVER_BUDGET = 5000


def n_model_points(dim):
    """Number of coefficients of a full quadratic in ``dim`` variables."""
    return (dim + 1) * (dim + 2) // 2


@dataclass
class QuadraticModel:
    """q(x) = constant + g.(x-c) + 0.5 (x-c).H.(x-c) around center c."""

    constant: float
    gradient: np.ndarray
    hessian: np.ndarray
    center: np.ndarray
    radius: float

    def value(self, x):
        d = np.asarray(x, dtype=float) - self.center
        return float(self.constant + self.gradient @ d + 0.5 * d @ self.hessian @ d)

    def grad(self, x):
        d = np.asarray(x, dtype=float) - self.center
        return self.gradient + self.hessian @ d


def select_fit_points(points, usable, center, frame, needed):
    """Indices of cached points for a model fit around ``center``.

    Points flagged as usable within Chebyshev distance ``2 * frame`` of the
    center are selected; when fewer than ``needed`` are found, the region is
    widened to ``4 * frame`` and then ``8 * frame``. The final selection is
    returned even if still insufficient.
    """
    if frame <= 0:
        raise ValueError("frame size must be positive")
    points = np.asarray(points, dtype=float)
    usable = np.asarray(usable, dtype=bool)
    dist = np.abs(points - np.asarray(center, dtype=float)).max(axis=1)
    selected = np.empty(0, dtype=int)
    for factor in (2.0, 4.0, 8.0):
        selected = np.flatnonzero(usable & (dist <= factor * frame))
        if selected.size >= needed:
            break
    return selected


def _basis_matrix(scaled):
    m, n = scaled.shape
    cols = [np.ones(m)]
    for i in range(n):
        cols.append(scaled[:, i])
    for i in range(n):
        for j in range(i, n):
            cols.append(scaled[:, i] * scaled[:, j])
    return np.column_stack(cols)


def build_quadratic_models(points, values, center):
    """Fit one quadratic per column of ``values``; None when unusable.

    All models share the interpolation geometry, so conditioning is checked
    once. Returns a list of :class:`QuadraticModel` or None when there are
    too few points, the geometry is degenerate, or the scaled basis matrix
    has condition estimate above ``COND_LIMIT``.
    """
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    m, n = points.shape
    if m < n_model_points(n):
        return None
    center = np.asarray(center, dtype=float)
    shifted = points - center
    radius = float(np.abs(shifted).max())
    if radius == 0.0:
        return None
    scaled = shifted / radius
    basis = _basis_matrix(scaled)
    coef, _, _, svals = np.linalg.lstsq(basis, values, rcond=None)
    if svals.size < basis.shape[1] or svals[-1] <= 0.0:
        return None
    if svals[0] / svals[-1] > COND_LIMIT:
        return None
    models = []
    for col in range(values.shape[1]):
        a = coef[:, col]
        gradient = a[1:n + 1] / radius
        hessian = np.zeros((n, n))
        k = n + 1
        for i in range(n):
            for j in range(i, n):
                if i == j:
                    hessian[i, i] = 2.0 * a[k] / radius ** 2
                else:
                    hessian[i, j] = hessian[j, i] = a[k] / radius ** 2
                k += 1
        models.append(QuadraticModel(float(a[0]), gradient, hessian,
                                     center.copy(), radius))
    return models


def build_quadratic_model(points, values, center):
    """Single-output convenience wrapper around :func:`build_quadratic_models`."""
    models = build_quadratic_models(points, values, center)
    return None if models is None else models[0]


def _merit(x, objective, constraints, weight):
    value = objective.value(x)
    grad = objective.grad(x)
    hess = objective.hessian.copy()
    for model in constraints:
        c = model.value(x)
        if c > 0.0:
            g = model.grad(x)
            value += weight * c * c
            grad = grad + 2.0 * weight * c * g
            hess = hess + 2.0 * weight * (c * model.hessian + np.outer(g, g))
    return value, grad, hess


def _merit_value(x, objective, constraints, weight):
    value = objective.value(x)
    for model in constraints:
        c = model.value(x)
        if c > 0.0:
            value += weight * c * c
    return value


def _violation(x, constraints):
    if not constraints:
        return 0.0
    return max(max(0.0, model.value(x)) for model in constraints)


class _Incumbent:
    # lexicographic tracking: model-feasible points beat infeasible ones,
    # then lower objective (feasible) or lower violation (infeasible) wins
    def __init__(self, constraints, feas_tol=1e-9):
        self.constraints = constraints
        self.feas_tol = feas_tol
        self.x = None
        self.key = None

    def offer(self, x, objective):
        viol = _violation(x, self.constraints)
        if viol <= self.feas_tol:
            key = (0, objective.value(x))
        else:
            key = (1, viol)
        if self.key is None or key < self.key:
            self.key = key
            self.x = x.copy()


def minimize_model(objective, constraint_models=(), box_center=None,
                   box_radius=None, budget=DEFAULT_SUBSOLVER_BUDGET):
    """Deterministic local minimizer of a quadratic model over a box.

    Minimizes ``objective`` subject to ``constraint_models <= 0`` over the
    Chebyshev ball of radius ``box_radius`` around ``box_center``, using
    projected modified-Newton steps on a quadratic-penalty merit with an
    increasing penalty weight. At most ``budget`` merit-gradient evaluations
    are spent. Always returns a point inside the box; when no model-feasible
    point is found, the least-violation point seen is returned.
    """
    if box_radius is None or box_radius <= 0:
        raise ValueError("box radius must be positive")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    center = np.asarray(box_center, dtype=float)
    lo = center - box_radius
    hi = center + box_radius
    constraints = list(constraint_models)
    weights = (0.0,) if not constraints else (1e2, 1e4, 1e6, 1e8)
    best = _Incumbent(constraints)
    x = center.copy()
    used = 0
    for weight in weights:
        for _ in range(200):
            if used >= budget:
                break
            value, grad, hess = _merit(x, objective, constraints, weight)
            used += 1
            best.offer(x, objective)
            projected_grad = x - np.clip(x - grad, lo, hi)
            scale = max(1.0, float(np.abs(x).max()))
            if np.abs(projected_grad).max() <= 1e-12 * scale:
                step = _negative_curvature_step(hess, box_radius)
                if step is None:
                    break
                trial = _line_search(x, step, value, objective, constraints,
                                     weight, lo, hi, both_signs=True)
                if trial is None:
                    break
                x = trial
                continue
            direction = _newton_direction(grad, hess)
            trial = _line_search(x, direction, value, objective, constraints,
                                 weight, lo, hi)
            if trial is None:
                trial = _line_search(x, -grad, value, objective, constraints,
                                     weight, lo, hi)
            if trial is None:
                break
            if np.abs(trial - x).max() <= 1e-15 * scale:
                x = trial
                break
            x = trial
        if used >= budget:
            break
    best.offer(x, objective)
    return np.clip(best.x, lo, hi)


def _newton_direction(grad, hess):
    eigvals, eigvecs = np.linalg.eigh(hess)
    floor = 1e-8 * max(1.0, float(np.abs(eigvals).max()))
    safe = np.maximum(eigvals, floor)
    return -eigvecs @ ((eigvecs.T @ grad) / safe)


def _negative_curvature_step(hess, box_radius):
    eigvals, eigvecs = np.linalg.eigh(hess)
    if eigvals[0] >= -1e-10 * max(1.0, float(np.abs(eigvals).max())):
        return None
    direction = eigvecs[:, 0]
    nonzero = np.flatnonzero(np.abs(direction) > 1e-14)
    if nonzero.size and direction[nonzero[0]] < 0:
        direction = -direction  # deterministic sign; caller probes both ways
    return direction * box_radius


def _line_search(x, direction, value, objective, constraints, weight, lo, hi,
                 both_signs=False):
    signs = (1.0, -1.0) if both_signs else (1.0,)
    for sign in signs:
        t = 1.0
        for _ in range(50):
            trial = np.clip(x + sign * t * direction, lo, hi)
            if _merit_value(trial, objective, constraints, weight) < value:
                return trial
            t *= 0.5
    return None


def quadratic_search(points, objective_values, constraint_values, usable,
                     center, frame, problem=None,
                     budget=DEFAULT_SUBSOLVER_BUDGET, needed=None):
    """Model-based search candidate around ``center``, or None.

    Usable cached points are selected by :func:`select_fit_points`; when the
    selection cannot determine a full quadratic (or the fit is rejected), no
    candidate is produced. Otherwise the objective model is minimized subject
    to the per-constraint models over the Chebyshev ball spanned by the
    selected points, and the result is clipped to the problem bounds.
    """
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return None
    n = points.shape[1]
    if needed is None:
        needed = n_model_points(n)
    selected = select_fit_points(points, usable, center, frame, needed)
    if selected.size < needed:
        return None
    sel_points = points[selected]
    columns = [np.asarray(objective_values, dtype=float)[selected]]
    n_cons = 0
    if constraint_values is not None:
        constraint_values = np.asarray(constraint_values, dtype=float)
        if constraint_values.size:
            n_cons = constraint_values.shape[1]
            for j in range(n_cons):
                columns.append(constraint_values[selected, j])
    models = build_quadratic_models(sel_points, np.column_stack(columns), center)
    if models is None:
        return None
    radius = float(np.abs(sel_points - np.asarray(center, dtype=float)).max())
    if radius <= 0.0:
        return None
    candidate = minimize_model(models[0], models[1:1 + n_cons],
                               box_center=center, box_radius=radius,
                               budget=budget)
    if problem is not None:
        candidate = problem.clip_to_bounds(candidate)
    return candidate
