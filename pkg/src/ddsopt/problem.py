"""Problem abstraction, extreme-barrier evaluation, and a subprocess adapter.

Constraints follow the ``c(x) <= 0`` convention: a point is feasible when it
is within bounds and every constraint value is nonpositive. Evaluation
failures of any kind (exceptions, non-finite output, child-process crashes,
timeouts) are treated as hidden constraints and mapped to an infinite
barrier value rather than raised.
"""

import subprocess
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

INFINITY = float("inf")


@dataclass
class Evaluation:
    """Outcome of one barrier evaluation."""

    point: np.ndarray
    barrier: float
    raw: float | None
    feasible: bool
    constraints: np.ndarray | None = None
    phase: str = "initial"
    eval_index: int = 0
    iteration: int = 0


class Problem:
    """Minimization problem with optional inequality constraints and bounds."""

    def __init__(self, name, dim, objective, constraints=(), lower=None,
                 upper=None, x0=None, check_start=True):
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        self.name = str(name)
        self.dim = int(dim)
        self.objective = objective
        self.constraints = list(constraints)
        self.lower = None if lower is None else np.asarray(lower, dtype=float)
        self.upper = None if upper is None else np.asarray(upper, dtype=float)
        for bound in (self.lower, self.upper):
            if bound is not None and bound.shape != (self.dim,):
                raise ValueError("bounds must match the problem dimension")
        if (self.lower is not None and self.upper is not None
                and np.any(self.lower > self.upper)):
            raise ValueError("lower bounds must not exceed upper bounds")
        if x0 is None:
            raise ValueError("a start point is required")
        self.x0 = np.asarray(x0, dtype=float)
        if self.x0.shape != (self.dim,):
            raise ValueError("start point must match the problem dimension")
        if check_start and not evaluate_barrier(self, self.x0).feasible:
            raise ValueError(f"start point of problem {self.name!r} is infeasible")

    @property
    def n_constraints(self):
        return len(self.constraints)

    def within_bounds(self, x):
        x = np.asarray(x, dtype=float)
        if self.lower is not None and np.any(x < self.lower):
            return False
        if self.upper is not None and np.any(x > self.upper):
            return False
        return True

    def clip_to_bounds(self, x):
        x = np.asarray(x, dtype=float)
        if self.lower is not None:
            x = np.maximum(x, self.lower)
        if self.upper is not None:
            x = np.minimum(x, self.upper)
        return x

    def __repr__(self):
        return (f"Problem({self.name!r}, n={self.dim}, "
                f"m={self.n_constraints})")


def evaluate_barrier(problem, x):
    """Evaluate the extreme-barrier value of ``problem`` at ``x``.

    Returns the objective value with ``feasible=True`` when ``x`` is within
    bounds and every constraint is nonpositive; otherwise an infinite barrier
    value. Underlying evaluation failures never propagate: they yield an
    infinite barrier (hidden-constraint convention). Dimension mismatches and
    non-finite inputs are hard errors.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.dim,):
        raise ValueError(f"point has shape {x.shape}, expected ({problem.dim},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("point has non-finite coordinates")
    point = x.copy()
    if not problem.within_bounds(point):
        return Evaluation(point, INFINITY, None, False)
    try:
        raw = float(problem.objective(point))
        cons = np.array([float(c(point)) for c in problem.constraints])
    except Exception:
        return Evaluation(point, INFINITY, None, False)
    raw_ok = np.isfinite(raw)
    cons_ok = bool(np.all(np.isfinite(cons))) if cons.size else True
    feasible = raw_ok and cons_ok and (not cons.size or bool(np.all(cons <= 0.0)))
    return Evaluation(
        point,
        raw if feasible else INFINITY,
        raw if raw_ok else None,
        feasible,
        cons if cons_ok else None,
    )


@dataclass
class _SubprocessEvaluator:
    """One-point memo around a line-protocol child process.

    Protocol: the point is written to the child's stdin as one line of
    space-separated decimals; the child prints one line ``f c1 ... cm`` and
    exits 0. Any other behaviour (nonzero exit, timeout, wrong token count,
    unparseable output) counts as a hidden constraint.
    """

    path: str
    timeout: float
    n_constraints: int
    _memo: tuple = field(default=None, repr=False)

    def _invoke(self, x):
        key = x.tobytes()
        if self._memo is not None and self._memo[0] == key:
            return self._memo[1], self._memo[2]
        f = INFINITY
        cons = np.full(self.n_constraints, INFINITY)
        line = " ".join(format(v, ".17g") for v in x) + "\n"
        try:
            proc = subprocess.run(
                [self.path], input=line, capture_output=True, text=True,
                timeout=self.timeout,
            )
            if proc.returncode == 0:
                tokens = proc.stdout.split()
                if len(tokens) == 1 + self.n_constraints:
                    values = [float(t) for t in tokens]
                    f = values[0]
                    cons = np.array(values[1:], dtype=float)
        except (OSError, subprocess.TimeoutExpired, ValueError):
            pass
        self._memo = (key, f, cons)
        return f, cons

    def objective(self, x):
        return self._invoke(np.asarray(x, dtype=float))[0]

    def constraint(self, index):
        def value(x):
            return self._invoke(np.asarray(x, dtype=float))[1][index]
        return value


def subprocess_blackbox(path, timeout=60.0, x0=None, n_constraints=0,
                        lower=None, upper=None, name=None):
    """Wrap an external executable as a :class:`Problem`.

    The executable must exist; per-evaluation failures are not errors but
    infinite barrier values. Each evaluation runs the child once and shares
    the parsed objective/constraint values between the objective and
    constraint callables, so the adapter serializes calls per instance.
    """
    exe = Path(path)
    if not exe.exists():
        raise FileNotFoundError(f"blackbox executable not found: {path}")
    if x0 is None:
        raise ValueError("a start point is required for a blackbox problem")
    x0 = np.asarray(x0, dtype=float)
    evaluator = _SubprocessEvaluator(str(exe), float(timeout), int(n_constraints))
    return Problem(
        name or f"blackbox:{exe.name}",
        x0.size,
        evaluator.objective,
        [evaluator.constraint(i) for i in range(int(n_constraints))],
        lower=lower,
        upper=upper,
        x0=x0,
        check_start=False,  # checking would spend an evaluation; run() verifies
    )
