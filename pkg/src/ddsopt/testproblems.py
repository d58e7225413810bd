"""Builtin analytic test problems.

Unconstrained least-squares-style problems are exposed in two compositions
of their residual vector r(x): "smooth" objectives sum r_i(x)**2 and
"nonsmooth" objectives sum |r_i(x)|. The constrained problems are small
classical inequality-constrained programs restated with the c(x) <= 0
convention and feasible start points.
"""

import numpy as np

from .problem import Problem

GAMMA_DEFAULT = 1e-2


def _saddle_poly(gamma=GAMMA_DEFAULT):
    # quasi-convex quintic with a saddle at 0 and global minimum at -5/3
    return Problem("f1", 1, lambda x: gamma * (x[0] + 2.0) * x[0] ** 5, x0=[1.0])


def _shifted_parabola():
    return Problem("f2", 1, lambda x: (x[0] - 1.0 / 3.0) ** 2, x0=[1.0])


def _sphere2d():
    return Problem(
        "sphere2d", 2, lambda x: float(x[0] ** 2 + x[1] ** 2),
        lower=[-10.0, -10.0], upper=[10.0, 10.0], x0=[3.0, 4.0],
    )


# ---------------------------------------------------------------------------
# Residual-vector bases (classic nonlinear least-squares test functions).

def _r_rosenbrock(x):
    return np.array([10.0 * (x[1] - x[0] ** 2), 1.0 - x[0]])


def _r_freudenstein_roth(x):
    return np.array([
        -13.0 + x[0] + ((5.0 - x[1]) * x[1] - 2.0) * x[1],
        -29.0 + x[0] + ((x[1] + 1.0) * x[1] - 14.0) * x[1],
    ])


def _r_powell_badly_scaled(x):
    return np.array([
        1e4 * x[0] * x[1] - 1.0,
        np.exp(-x[0]) + np.exp(-x[1]) - 1.0001,
    ])


def _r_brown_badly_scaled(x):
    return np.array([x[0] - 1e6, x[1] - 2e-6, x[0] * x[1] - 2.0])


def _r_beale(x):
    y = (1.5, 2.25, 2.625)
    return np.array([y[i] - x[0] * (1.0 - x[1] ** (i + 1)) for i in range(3)])


def _r_jennrich_sampson(x):
    i = np.arange(1.0, 11.0)
    return 2.0 + 2.0 * i - (np.exp(i * x[0]) + np.exp(i * x[1]))


def _r_helical_valley(x):
    if x[0] > 0.0:
        theta = np.arctan(x[1] / x[0]) / (2.0 * np.pi)
    elif x[0] < 0.0:
        theta = np.arctan(x[1] / x[0]) / (2.0 * np.pi) + 0.5
    else:
        theta = 0.25 if x[1] >= 0.0 else -0.25
    return np.array([
        10.0 * (x[2] - 10.0 * theta),
        10.0 * (np.sqrt(x[0] ** 2 + x[1] ** 2) - 1.0),
        x[2],
    ])


_BARD_Y = np.array([
    0.14, 0.18, 0.22, 0.25, 0.29, 0.32, 0.35, 0.39,
    0.37, 0.58, 0.73, 0.96, 1.34, 2.10, 4.39,
])


def _r_bard(x):
    u = np.arange(1.0, 16.0)
    v = 16.0 - u
    w = np.minimum(u, v)
    return _BARD_Y - (x[0] + u / (v * x[1] + w * x[2]))


_GAUSSIAN_Y = np.array([
    0.0009, 0.0044, 0.0175, 0.0540, 0.1295, 0.2420, 0.3521, 0.3989,
    0.3521, 0.2420, 0.1295, 0.0540, 0.0175, 0.0044, 0.0009,
])


def _r_gaussian(x):
    t = (8.0 - np.arange(1.0, 16.0)) / 2.0
    return x[0] * np.exp(-x[1] * (t - x[2]) ** 2 / 2.0) - _GAUSSIAN_Y


def _r_box3d(x):
    t = 0.1 * np.arange(1.0, 11.0)
    return (np.exp(-t * x[0]) - np.exp(-t * x[1])
            - x[2] * (np.exp(-t) - np.exp(-10.0 * t)))


def _r_powell_singular(x):
    return np.array([
        x[0] + 10.0 * x[1],
        np.sqrt(5.0) * (x[2] - x[3]),
        (x[1] - 2.0 * x[2]) ** 2,
        np.sqrt(10.0) * (x[0] - x[3]) ** 2,
    ])


def _r_wood(x):
    return np.array([
        10.0 * (x[1] - x[0] ** 2),
        1.0 - x[0],
        np.sqrt(90.0) * (x[3] - x[2] ** 2),
        1.0 - x[2],
        np.sqrt(10.0) * (x[1] + x[3] - 2.0),
        (x[1] - x[3]) / np.sqrt(10.0),
    ])


def _r_trigonometric(n):
    def residual(x):
        i = np.arange(1.0, n + 1.0)
        return n - np.sum(np.cos(x)) + i * (1.0 - np.cos(x)) - np.sin(x)
    return residual


# name -> (dimension, residual function, start point)
RESIDUAL_BASES = {
    "rosenbrock": (2, _r_rosenbrock, [-1.2, 1.0]),
    "freudenstein_roth": (2, _r_freudenstein_roth, [0.5, -2.0]),
    "powell_badly_scaled": (2, _r_powell_badly_scaled, [0.0, 1.0]),
    "brown_badly_scaled": (2, _r_brown_badly_scaled, [1.0, 1.0]),
    "beale": (2, _r_beale, [1.0, 1.0]),
    "jennrich_sampson": (2, _r_jennrich_sampson, [0.3, 0.4]),
    "helical_valley": (3, _r_helical_valley, [-1.0, 0.0, 0.0]),
    "bard": (3, _r_bard, [1.0, 1.0, 1.0]),
    "gaussian": (3, _r_gaussian, [0.4, 1.0, 0.0]),
    "box3d": (3, _r_box3d, [0.0, 10.0, 20.0]),
    "powell_singular": (4, _r_powell_singular, [3.0, -1.0, 0.0, 1.0]),
    "wood": (4, _r_wood, [-3.0, -1.0, -3.0, -1.0]),
    "trigonometric5": (5, _r_trigonometric(5), [0.2] * 5),
    "trigonometric10": (10, _r_trigonometric(10), [0.1] * 10),
}


def residual_problem(base, composition):
    """Problem built from a registered residual vector.

    ``composition`` is "smooth" (sum of squares) or "nonsmooth" (sum of
    absolute values).
    """
    if base not in RESIDUAL_BASES:
        raise ValueError(f"unknown residual base {base!r}")
    dim, residual, start = RESIDUAL_BASES[base]
    if composition == "smooth":
        objective = lambda x: float(np.sum(residual(x) ** 2))
    elif composition == "nonsmooth":
        objective = lambda x: float(np.sum(np.abs(residual(x))))
    else:
        raise ValueError("composition must be 'smooth' or 'nonsmooth'")
    return Problem(f"mw_{base}_{composition}", dim, objective, x0=start)


# ---------------------------------------------------------------------------
# Constrained problems (classical small inequality-constrained programs).

def _hs12():
    return Problem(
        "hs12", 2,
        lambda x: 0.5 * x[0] ** 2 + x[1] ** 2 - x[0] * x[1] - 7.0 * x[0] - 7.0 * x[1],
        [lambda x: 4.0 * x[0] ** 2 + x[1] ** 2 - 25.0],
        x0=[0.0, 0.0],
    )


def _hs24():
    s = np.sqrt(3.0)
    return Problem(
        "hs24", 2,
        lambda x: ((x[0] - 3.0) ** 2 - 9.0) * x[1] ** 3 / (27.0 * s),
        [
            lambda x: x[1] - x[0] / s,
            lambda x: -x[0] - s * x[1],
            lambda x: x[0] + s * x[1] - 6.0,
        ],
        lower=[0.0, 0.0],
        x0=[1.0, 0.5],
    )


def _hs29():
    return Problem(
        "hs29", 3,
        lambda x: -x[0] * x[1] * x[2],
        [lambda x: x[0] ** 2 + 2.0 * x[1] ** 2 + 4.0 * x[2] ** 2 - 48.0],
        x0=[1.0, 1.0, 1.0],
    )


def _hs30():
    return Problem(
        "hs30", 3,
        lambda x: x[0] ** 2 + x[1] ** 2 + x[2] ** 2,
        [lambda x: 1.0 - x[0] ** 2 - x[1] ** 2],
        lower=[1.0, -10.0, -10.0], upper=[10.0, 10.0, 10.0],
        x0=[1.0, 1.0, 1.0],
    )


def _hs31():
    return Problem(
        "hs31", 3,
        lambda x: 9.0 * x[0] ** 2 + x[1] ** 2 + 9.0 * x[2] ** 2,
        [lambda x: 1.0 - x[0] * x[1]],
        lower=[-10.0, 1.0, -10.0], upper=[10.0, 10.0, 1.0],
        x0=[1.0, 1.0, 1.0],
    )


def _hs35():
    return Problem(
        "hs35", 3,
        lambda x: (9.0 - 8.0 * x[0] - 6.0 * x[1] - 4.0 * x[2]
                   + 2.0 * x[0] ** 2 + 2.0 * x[1] ** 2 + x[2] ** 2
                   + 2.0 * x[0] * x[1] + 2.0 * x[0] * x[2]),
        [lambda x: x[0] + x[1] + 2.0 * x[2] - 3.0],
        lower=[0.0, 0.0, 0.0],
        x0=[0.5, 0.5, 0.5],
    )


def _hs36():
    return Problem(
        "hs36", 3,
        lambda x: -x[0] * x[1] * x[2],
        [lambda x: x[0] + 2.0 * x[1] + 2.0 * x[2] - 72.0],
        lower=[0.0, 0.0, 0.0], upper=[20.0, 11.0, 42.0],
        x0=[10.0, 10.0, 10.0],
    )


def _hs43():
    return Problem(
        "hs43", 4,
        lambda x: (x[0] ** 2 + x[1] ** 2 + 2.0 * x[2] ** 2 + x[3] ** 2
                   - 5.0 * x[0] - 5.0 * x[1] - 21.0 * x[2] + 7.0 * x[3]),
        [
            lambda x: (x[0] ** 2 + x[1] ** 2 + x[2] ** 2 + x[3] ** 2
                       + x[0] - x[1] + x[2] - x[3] - 8.0),
            lambda x: (x[0] ** 2 + 2.0 * x[1] ** 2 + x[2] ** 2 + 2.0 * x[3] ** 2
                       - x[0] - x[3] - 10.0),
            lambda x: (2.0 * x[0] ** 2 + x[1] ** 2 + x[2] ** 2
                       + 2.0 * x[0] - x[1] - x[3] - 5.0),
        ],
        x0=[0.0, 0.0, 0.0, 0.0],
    )


def _hs76():
    return Problem(
        "hs76", 4,
        lambda x: (x[0] ** 2 + 0.5 * x[1] ** 2 + x[2] ** 2 + 0.5 * x[3] ** 2
                   - x[0] * x[2] + x[2] * x[3]
                   - x[0] - 3.0 * x[1] + x[2] - x[3]),
        [
            lambda x: x[0] + 2.0 * x[1] + x[2] + x[3] - 5.0,
            lambda x: 3.0 * x[0] + x[1] + 2.0 * x[2] - x[3] - 4.0,
            lambda x: 1.5 - x[1] - 4.0 * x[2],
        ],
        lower=[0.0, 0.0, 0.0, 0.0],
        x0=[0.5, 0.5, 0.5, 0.5],
    )


CONSTRAINED_NAMES = ("hs12", "hs24", "hs29", "hs30", "hs31", "hs35", "hs36",
                     "hs43", "hs76")

_FACTORIES = {
    "f1": _saddle_poly,
    "f2": _shifted_parabola,
    "sphere2d": _sphere2d,
    "hs12": _hs12,
    "hs24": _hs24,
    "hs29": _hs29,
    "hs30": _hs30,
    "hs31": _hs31,
    "hs35": _hs35,
    "hs36": _hs36,
    "hs43": _hs43,
    "hs76": _hs76,
}

for _base in RESIDUAL_BASES:
    for _comp in ("smooth", "nonsmooth"):
        _FACTORIES[f"mw_{_base}_{_comp}"] = (
            lambda b=_base, c=_comp: residual_problem(b, c))

# convenience alias used by the CLI examples
_FACTORIES["rosenbrock2d"] = lambda: residual_problem("rosenbrock", "smooth")


def available_problems():
    return sorted(_FACTORIES)


def builtin_problem(name):
    """Instantiate a registered problem by name."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        known = ", ".join(available_problems())
        raise ValueError(f"unknown problem {name!r}; registry: {known}") from None
    return factory()
