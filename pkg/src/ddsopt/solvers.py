"""Directional direct-search drivers sharing one iteration skeleton.

Three acceptance regimes run on the same search/poll/update loop:

* ``ads``  - simple decrease, with candidates filtered through the punctured
  space (the region at least one exclusion radius away from every visited
  point). Search points are always evaluated; an improving search point that
  falls inside an exclusion ball triggers polling around it instead of
  immediate acceptance.
* ``mads`` - simple decrease on a mesh anchored at the incumbent; search
  candidates are projected onto the mesh and poll points lie on the frame.
* ``sdds`` - sufficient decrease through a forcing function; trial points are
  unrestricted but must beat the incumbent by a margin.

A fourth driver reproduces the mesh-based method as a parameterization of the
exclusion-region one (same trial points, different bookkeeping); it backs the
``equiv-check`` command.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import MeshSpec, VisitedSet, householder_directions
from .history import EvalRecord, IterationStats, RunHistory, options_hash
from .models import quadratic_search
from .problem import evaluate_barrier

ALGORITHMS = ("ads", "mads", "sdds")
SEARCHES = ("none", "quadratic")
OUTCOMES = ("search_success", "poll_success", "improving_poll_fail",
            "unsuccessful")

DEFAULT_EXCL_MIN = 1e-12


@dataclass(frozen=True)
class ForcingFunction:
    """Sufficient-decrease threshold rho(t) = coeff * t**2."""

    coeff: float = 1e-2

    def __call__(self, t):
        return self.coeff * t * t


def update_ads(frame, excl, success, tau, frame0):
    """Frame/exclusion update for the exclusion-region driver.

    Successes expand the frame by 1/tau, failures contract it by tau; the
    exclusion size follows as min(frame, frame**2 / frame0), which vanishes
    faster than the frame when the frame shrinks below its initial value.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie strictly between 0 and 1")
    if frame <= 0 or excl <= 0 or frame0 <= 0:
        raise ValueError("step sizes must be positive")
    new_frame = frame / tau if success else tau * frame
    return new_frame, min(new_frame, new_frame * new_frame / frame0)


_RATIONAL_CACHE = {}


def rational_tau(tau, max_den=1000):
    """Return (p, q) with tau exactly p/q, or raise ValueError.

    Mesh-based updates need a rational contraction ratio; a float that is not
    exactly a small-denominator rational is rejected.
    """
    key = float(tau)
    if key not in _RATIONAL_CACHE:
        frac = Fraction(key).limit_denominator(max_den)
        if float(frac) != key or not 0 < frac < 1:
            raise ValueError(
                f"tau={tau!r} is not a rational p/q in (0, 1) with q <= {max_den}")
        _RATIONAL_CACHE[key] = (frac.numerator, frac.denominator)
    return _RATIONAL_CACHE[key]


def update_mads(frame, mesh, success, tau):
    """Frame/mesh update for the mesh-based driver.

    The mesh size contracts/expands by tau and the frame follows as
    max(sqrt(mesh), mesh), so the frame shrinks much slower than the mesh.
    """
    rational_tau(tau)
    if frame <= 0 or mesh <= 0:
        raise ValueError("step sizes must be positive")
    new_mesh = mesh / tau if success else tau * mesh
    return max(np.sqrt(new_mesh), new_mesh), new_mesh


def sdds_accept(candidate_value, incumbent_value, excl, forcing):
    """Sufficient-decrease test: strict improvement by more than rho(excl)."""
    if excl <= 0:
        raise ValueError("step size must be positive")
    return candidate_value < incumbent_value - forcing(excl)


def compute_mu(p, exponent, mesh0, inv_basis_norm):
    """Exclusion-to-mesh scale p**exponent * mesh0 / inv_basis_norm.

    ``inv_basis_norm`` is the operator norm of the inverse mesh basis; with
    cardinal directions it equals 1.
    """
    if mesh0 <= 0 or inv_basis_norm <= 0:
        raise ValueError("mesh size and basis norm must be positive")
    return p ** exponent * mesh0 / inv_basis_norm


@dataclass(frozen=True)
class EquivalenceParams:
    """Parameters tying the exclusion-region driver to the mesh-based one.

    With contraction ratio p/q, exclusion scale mu, and the running count of
    unsuccessful iterations, the implied mesh size is
    ``q**n_unsuccessful * excl / mu``.
    """

    p: int
    q: int
    mu: float
    exponent: int = 0

    def __post_init__(self):
        if self.p < 1 or self.q < 2 or self.p >= self.q:
            raise ValueError("need integers 1 <= p < q with q >= 2")
        if self.mu <= 0:
            raise ValueError("mu must be positive")

    @property
    def tau(self):
        return self.p / self.q


def ads_as_orthomads_update(frame, excl, success, params, n_unsuccessful):
    """Update rule of the exclusion-region instance equivalent to the mesh driver.

    The exclusion size is contracted by tau/q on failure (faster than the
    mesh driver's tau), while the frame tracks the mesh driver's frame
    through the implied mesh size q**n_unsuccessful * excl / mu.
    """
    tau = params.p / params.q
    implied_mesh = params.q ** n_unsuccessful * excl / params.mu
    inner = implied_mesh / tau if success else tau * implied_mesh
    new_frame = max(np.sqrt(inner), inner)
    new_excl = excl / tau if success else excl * tau / params.q
    return new_frame, new_excl


@dataclass
class SolverState:
    """Mutable per-run state of a driver."""

    x: np.ndarray
    fx: float
    frame: float
    excl: float
    frame0: float
    excl0: float = None
    iteration: int = 0
    n_unsuccessful: int = 0
    poll_center: np.ndarray = None

    def __post_init__(self):
        if self.excl0 is None:
            self.excl0 = self.excl


@dataclass
class IterationOutcome:
    kind: str
    accepted: np.ndarray | None
    evaluations: list


class EvaluationCache:
    """Visited-point archive plus the values needed for model fitting."""

    def __init__(self, dim, n_constraints=0, excl_norm="l2"):
        self.visited = VisitedSet(dim, norm=excl_norm)
        self.n_constraints = n_constraints
        self.barrier = []
        self.raw = []
        self.feasible = []
        self.cons = []

    def __len__(self):
        return len(self.visited)

    def lookup(self, x):
        return self.visited.duplicate_index(x)

    def add(self, ev):
        idx = self.visited.append(ev.point)
        self.barrier.append(ev.barrier)
        self.raw.append(ev.raw)
        self.feasible.append(ev.feasible)
        self.cons.append(ev.constraints)
        return idx

    def model_arrays(self):
        """(points, objective values, constraint matrix, usable mask)."""
        points = self.visited.points
        raw = np.array([np.nan if v is None else v for v in self.raw])
        usable = np.isfinite(raw)
        cons = None
        if self.n_constraints:
            cons = np.full((len(self.raw), self.n_constraints), np.nan)
            for i, row in enumerate(self.cons):
                if row is not None and row.size == self.n_constraints:
                    cons[i] = row
            usable &= np.all(np.isfinite(cons), axis=1)
        return points, raw, cons, usable


class _BudgetExhausted(Exception):
    pass


class _RunContext:
    def __init__(self, problem, budget, rng, cache, history,
                 subsolver_budget, min_model_points):
        self.problem = problem
        self.budget = budget
        self.rng = rng
        self.cache = cache
        self.history = history
        self.subsolver_budget = subsolver_budget
        self.min_model_points = min_model_points
        self.evals = 0
        self.best = np.inf

    def evaluate(self, x, phase, iteration, frame, excl):
        """Barrier value at ``x``; duplicates are served from the cache.

        Returns (value, cached). Cache hits consume no budget and leave no
        history record. Raises when a fresh evaluation would exceed the
        budget.
        """
        x = np.asarray(x, dtype=float)
        idx = self.cache.lookup(x)
        if idx is not None:
            return self.cache.barrier[idx], True
        if self.evals >= self.budget:
            raise _BudgetExhausted
        ev = evaluate_barrier(self.problem, x)
        self.evals += 1
        self.cache.add(ev)
        if ev.barrier < self.best:
            self.best = ev.barrier
        self.history.records.append(EvalRecord(
            eval_index=self.evals, iteration=iteration, phase=phase,
            point=ev.point, raw=ev.raw, barrier=ev.barrier,
            feasible=ev.feasible, incumbent=self.best,
            frame=frame, excl=excl,
        ))
        return ev.barrier, False


def _unit_vector(rng, n):
    while True:
        g = rng.standard_normal(n)
        norm = float(np.linalg.norm(g))
        if norm > 1e-12:
            return g / norm


# ---------------------------------------------------------------------------
# Per-algorithm rules plugged into the shared iteration skeleton.

class _AdsRules:
    name = "ads"
    poll_norm = "l2"

    def __init__(self, tau, frame0, forcing):
        if not 0.0 < tau < 1.0:
            raise ValueError("tau must lie strictly between 0 and 1")
        self.tau = tau
        self.frame0 = frame0
        self.forcing = forcing

    def prepare_search(self, ctx, state, cand):
        return cand

    def search_membership(self, ctx, state, cand):
        # measured before the candidate itself enters the archive
        return ctx.cache.visited.in_punctured_space(cand, state.excl)

    def classify_search(self, value, state, in_punctured):
        if not value < state.fx:
            return None
        return "success" if in_punctured else "improving"

    def poll_points_from(self, ctx, state, center, dirs):
        return [center + state.frame * d for d in dirs]

    def poll_points(self, ctx, state, center, seed_vec):
        dirs = householder_directions(seed_vec, self.poll_norm).directions
        return self.poll_points_from(ctx, state, center, dirs)

    def poll_admissible(self, ctx, state, cand):
        return ctx.cache.visited.in_punctured_space(cand, state.excl)

    def poll_accepts(self, value, ref, state):
        return value < ref

    def update(self, state, success):
        return update_ads(state.frame, state.excl, success, self.tau,
                          self.frame0)


class _MadsRules(_AdsRules):
    name = "mads"
    poll_norm = "linf"

    def __init__(self, tau, frame0, forcing):
        rational_tau(tau)
        super().__init__(tau, frame0, forcing)

    def prepare_search(self, ctx, state, cand):
        return MeshSpec(state.x, state.excl).project(cand)

    def search_membership(self, ctx, state, cand):
        return None

    def classify_search(self, value, state, in_punctured):
        return "success" if value < state.fx else None

    def poll_points_from(self, ctx, state, center, dirs):
        mesh = MeshSpec(center, state.excl)
        return [mesh.project(center + state.frame * d) for d in dirs]

    def poll_admissible(self, ctx, state, cand):
        return True

    def update(self, state, success):
        frame, mesh = update_mads(state.frame, state.excl, success, self.tau)
        # The mesh never coarsens beyond its initial size (standard practice
        # in the orthogonal-basis mesh methods); without this cap, trial
        # points of a coarse mesh can fall closer than the exclusion radius
        # of the equivalent exclusion-region instance to points of an
        # earlier, finer mesh.
        if mesh > state.excl0:
            mesh = state.excl0
            frame = max(np.sqrt(mesh), mesh)
        return frame, mesh


class _SddsRules(_AdsRules):
    name = "sdds"

    def search_membership(self, ctx, state, cand):
        return None

    def classify_search(self, value, state, in_punctured):
        ok = sdds_accept(value, state.fx, state.excl, self.forcing)
        return "success" if ok else None

    def poll_admissible(self, ctx, state, cand):
        return True

    def poll_accepts(self, value, ref, state):
        return sdds_accept(value, ref, state.excl, self.forcing)


class _OrthoInstanceRules(_AdsRules):
    """Exclusion-region driver generating the mesh driver's trial points."""

    name = "ads_orthomads_instance"
    poll_norm = "linf"

    def __init__(self, params, frame0):
        super().__init__(params.tau, frame0, ForcingFunction())
        self.params = params

    def implied_mesh(self, state):
        return self.params.q ** state.n_unsuccessful * state.excl / self.params.mu

    def prepare_search(self, ctx, state, cand):
        return MeshSpec(state.x, self.implied_mesh(state)).project(cand)

    def poll_points_from(self, ctx, state, center, dirs):
        mesh = MeshSpec(center, self.implied_mesh(state))
        return [mesh.project(center + state.frame * d) for d in dirs]

    def update(self, state, success):
        frame, excl = ads_as_orthomads_update(state.frame, state.excl,
                                              success, self.params,
                                              state.n_unsuccessful)
        # mirror the mesh driver's cap: the implied mesh size never exceeds
        # its initial value, so the exclusion size is capped at
        # mu * mesh0 / q**n_unsuccessful for the post-update count
        n_next = state.n_unsuccessful + (0 if success else 1)
        mesh0 = state.excl0 / self.params.mu
        if self.params.q ** n_next * excl / self.params.mu > mesh0:
            excl = self.params.mu * mesh0 / self.params.q ** n_next
            frame = max(np.sqrt(mesh0), mesh0)
        return frame, excl


_RULES = {"ads": _AdsRules, "mads": _MadsRules, "sdds": _SddsRules}


# ---------------------------------------------------------------------------
# Iteration skeleton.

def _poll_step(ctx, state, rules, center, ref, opportunistic,
               fixed_directions=None):
    if fixed_directions is None:
        seed_vec = _unit_vector(ctx.rng, ctx.problem.dim)
        candidates = rules.poll_points(ctx, state, center, seed_vec)
    else:
        candidates = rules.poll_points_from(ctx, state, center,
                                            fixed_directions)
    evaluated = []
    for cand in candidates:
        if not rules.poll_admissible(ctx, state, cand):
            continue
        value, _ = ctx.evaluate(cand, "poll", state.iteration, state.frame,
                                state.excl)
        if opportunistic:
            if rules.poll_accepts(value, ref, state):
                return cand, value
        else:
            evaluated.append((value, len(evaluated), cand))
    if not opportunistic and evaluated:
        value, _, cand = min(evaluated, key=lambda t: (t[0], t[1]))
        if rules.poll_accepts(value, ref, state):
            return cand, value
    return None


def _iterate(ctx, state, rules, search_fn, opportunistic,
             fixed_directions=None):
    records_before = len(ctx.history.records)
    stats = IterationStats(
        iteration=state.iteration, outcome="unsuccessful", frame=state.frame,
        excl=state.excl, n_unsuccessful=state.n_unsuccessful, evaluations=0,
    )
    kind = None
    accepted = None
    accepted_value = None
    improving = None
    improving_value = None

    candidates = search_fn(ctx, state) if search_fn is not None else []
    evaluated = []
    for cand in candidates:
        cand = rules.prepare_search(ctx, state, cand)
        if cand is None:
            continue
        membership = rules.search_membership(ctx, state, cand)
        value, _ = ctx.evaluate(cand, "search", state.iteration, state.frame,
                                state.excl)
        if opportunistic:
            klass = rules.classify_search(value, state, membership)
            if klass == "success":
                kind, accepted, accepted_value = "search_success", cand, value
                break
            if klass == "improving":
                improving, improving_value = cand, value
                break
        else:
            evaluated.append((value, len(evaluated), cand, membership))
    if not opportunistic and evaluated and kind is None:
        value, _, cand, membership = min(evaluated, key=lambda t: (t[0], t[1]))
        klass = rules.classify_search(value, state, membership)
        if klass == "success":
            kind, accepted, accepted_value = "search_success", cand, value
        elif klass == "improving":
            improving, improving_value = cand, value

    if kind is None:
        if improving is not None:
            center, ref = improving, improving_value
        else:
            center, ref = state.x, state.fx
        state.poll_center = np.asarray(center, dtype=float)
        result = _poll_step(ctx, state, rules, center, ref, opportunistic,
                            fixed_directions=fixed_directions)
        if result is not None:
            kind = "poll_success"
            accepted, accepted_value = result
        elif improving is not None:
            kind = "improving_poll_fail"
            accepted, accepted_value = improving, improving_value
        else:
            kind = "unsuccessful"
    else:
        state.poll_center = state.x

    success = kind in ("search_success", "poll_success")
    if accepted is not None:
        state.x = np.asarray(accepted, dtype=float).copy()
        state.fx = accepted_value
    new_frame, new_excl = rules.update(state, success)
    if not success:
        state.n_unsuccessful += 1
    state.frame = new_frame
    state.excl = new_excl

    stats.outcome = kind
    stats.evaluations = len(ctx.history.records) - records_before
    ctx.history.iterations.append(stats)
    return IterationOutcome(kind, None if accepted is None else state.x.copy(),
                            ctx.history.records[records_before:])


# ---------------------------------------------------------------------------
# Single-stepping interface (used by the tests and for experimentation).

def start_run(problem, frame0=1.0, excl0=None, budget=None, seed=0,
              subsolver_budget=5000, min_model_points=None):
    """Evaluate the start point and return (state, context) for stepping.

    The context carries the evaluation cache, the run history, and the
    budget; pass both to one of the ``*_iteration`` functions to advance the
    run one iteration at a time.
    """
    if excl0 is None:
        excl0 = frame0
    if excl0 > frame0:
        raise ValueError("initial exclusion size must not exceed the frame size")
    cache = EvaluationCache(problem.dim, problem.n_constraints)
    history = RunHistory(metadata={"algorithm": "manual",
                                   "problem": problem.name, "seed": seed,
                                   "n": problem.dim})
    ctx = _RunContext(problem, budget if budget is not None else 2 ** 62,
                      np.random.default_rng(seed), cache, history,
                      subsolver_budget, min_model_points)
    value, _ = ctx.evaluate(problem.x0, "initial", 0, frame0, excl0)
    if not np.isfinite(value):
        raise ValueError(
            f"start point of problem {problem.name!r} is infeasible")
    state = SolverState(x=np.asarray(problem.x0, dtype=float).copy(),
                        fx=value, frame=frame0, excl=excl0, frame0=frame0,
                        poll_center=np.asarray(problem.x0, dtype=float).copy())
    return state, ctx


def _as_search_fn(search):
    if search is None:
        return None
    if callable(search):
        return search
    points = [np.asarray(p, dtype=float) for p in search]
    return lambda ctx, state: points


def _as_directions(directions):
    if directions is None:
        return None
    from .geometry import PollDirections
    if isinstance(directions, PollDirections):
        return directions.directions
    return np.asarray(directions, dtype=float)


def _step(rules, state, ctx, directions, search, opportunistic):
    out = _iterate(ctx, state, rules, _as_search_fn(search), opportunistic,
                   fixed_directions=_as_directions(directions))
    state.iteration += 1
    return out


def ads_iteration(state, ctx, directions=None, search=None,
                  opportunistic=True, tau=0.5, forcing=None):
    """One exclusion-region iteration; ``directions`` overrides the random poll."""
    rules = _AdsRules(tau, state.frame0, forcing or ForcingFunction())
    return _step(rules, state, ctx, directions, search, opportunistic)


def mads_iteration(state, ctx, directions=None, search=None,
                   opportunistic=True, tau=0.5):
    """One mesh-based iteration around the incumbent."""
    rules = _MadsRules(tau, state.frame0, ForcingFunction())
    return _step(rules, state, ctx, directions, search, opportunistic)


def sdds_iteration(state, ctx, directions=None, search=None,
                   opportunistic=True, tau=0.5, forcing=None):
    """One sufficient-decrease iteration; the poll center is the incumbent."""
    rules = _SddsRules(tau, state.frame0, forcing or ForcingFunction())
    return _step(rules, state, ctx, directions, search, opportunistic)


def _quadratic_search_fn(ctx, state):
    points, raw, cons, usable = ctx.cache.model_arrays()
    cand = quadratic_search(points, raw, cons, usable, center=state.x,
                            frame=state.frame, problem=ctx.problem,
                            budget=ctx.subsolver_budget,
                            needed=ctx.min_model_points)
    return [] if cand is None else [cand]


_SEARCH_FNS = {"none": None, "quadratic": _quadratic_search_fn}


def _drive(problem, rules, budget, seed, search, opportunistic, frame0, excl0,
           excl_min, metadata, subsolver_budget, min_model_points,
           max_iterations, excl_norm="l2"):
    rng = np.random.default_rng(seed)
    cache = EvaluationCache(problem.dim, problem.n_constraints,
                            excl_norm=excl_norm)
    history = RunHistory(metadata=metadata)
    ctx = _RunContext(problem, budget, rng, cache, history, subsolver_budget,
                      min_model_points)
    value, _ = ctx.evaluate(problem.x0, "initial", 0, frame0, excl0)
    if not np.isfinite(value):
        raise ValueError(
            f"start point of problem {problem.name!r} is infeasible")
    state = SolverState(x=np.asarray(problem.x0, dtype=float).copy(),
                        fx=value, frame=frame0, excl=excl0, frame0=frame0,
                        poll_center=np.asarray(problem.x0, dtype=float).copy())
    if max_iterations is None:
        max_iterations = 1000 + 100 * budget
    search_fn = _SEARCH_FNS[search]
    try:
        # the extra positivity check guards against float underflow of the
        # step sizes when excl_min is set to zero
        while (ctx.evals < budget and state.excl >= excl_min
               and state.excl > 0.0
               and state.iteration < max_iterations):
            _iterate(ctx, state, rules, search_fn, opportunistic)
            state.iteration += 1
    except _BudgetExhausted:
        pass
    metadata["evaluations"] = ctx.evals
    return history


def run(algorithm, problem, budget, seed=0, *, search="none", tau=0.5,
        opportunistic=True, frame0=1.0, excl0=None,
        excl_min=DEFAULT_EXCL_MIN, forcing_coeff=1e-2, subsolver_budget=5000,
        min_model_points=None, max_iterations=None, excl_norm="l2"):
    """Run one driver on ``problem`` and return its :class:`RunHistory`.

    The run stops when ``budget`` evaluations have been spent or the
    exclusion/mesh size drops below ``excl_min``. Identical argument tuples
    replay to bit-identical histories: the per-iteration poll seed vectors
    are the only source of randomness and are drawn from ``seed``.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"algorithm must be one of {ALGORITHMS}")
    if search not in SEARCHES:
        raise ValueError(f"search must be one of {SEARCHES}")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if excl0 is None:
        excl0 = frame0
    if excl0 > frame0:
        raise ValueError("initial exclusion size must not exceed the frame size")
    rules = _RULES[algorithm](tau, frame0, ForcingFunction(forcing_coeff))
    options = {
        "search": search, "tau": tau, "opportunistic": opportunistic,
        "frame0": frame0, "excl0": excl0, "excl_min": excl_min,
        "forcing_coeff": forcing_coeff, "subsolver_budget": subsolver_budget,
        "min_model_points": min_model_points, "excl_norm": excl_norm,
    }
    metadata = {
        "algorithm": algorithm, "problem": problem.name, "seed": seed,
        "budget": budget, "n": problem.dim, "options": options,
        "options_hash": options_hash(options),
    }
    return _drive(problem, rules, budget, seed, search, opportunistic, frame0,
                  excl0, excl_min, metadata, subsolver_budget,
                  min_model_points, max_iterations, excl_norm=excl_norm)


def run_orthomads_instance(problem, budget, seed=0, *, tau_num=1, tau_den=2,
                           search="none", opportunistic=True, mesh0=1.0,
                           mu=None, exponent=0, excl_min=DEFAULT_EXCL_MIN,
                           subsolver_budget=5000, min_model_points=None,
                           max_iterations=None):
    """Run the exclusion-region instance that replays the mesh-based driver.

    With the cardinal direction basis the inverse-basis norm is 1, so the
    default scale factor is mu = tau_num**exponent * mesh0.
    """
    if mu is None:
        mu = compute_mu(tau_num, exponent, mesh0, 1.0)
    params = EquivalenceParams(p=tau_num, q=tau_den, mu=mu, exponent=exponent)
    frame0 = float(max(np.sqrt(mesh0), mesh0))
    excl0 = mu * mesh0
    rules = _OrthoInstanceRules(params, frame0)
    options = {
        "search": search, "tau_num": tau_num, "tau_den": tau_den, "mu": mu,
        "exponent": exponent, "opportunistic": opportunistic, "mesh0": mesh0,
        "excl_min": excl_min, "subsolver_budget": subsolver_budget,
        "min_model_points": min_model_points,
    }
    metadata = {
        "algorithm": rules.name, "problem": problem.name, "seed": seed,
        "budget": budget, "n": problem.dim, "options": options,
        "options_hash": options_hash(options),
    }
    return _drive(problem, rules, budget, seed, search, opportunistic, frame0,
                  excl0, excl_min, metadata, subsolver_budget,
                  min_model_points, max_iterations)


def run_equivalence_pair(problem_factory, budget, seed=0, *, tau_num=1,
                         tau_den=2, search="none", mesh0=1.0):
    """Run the mesh driver and its exclusion-region twin on fresh problems.

    The secondary small-step stop is disabled on both sides: the instance's
    exclusion size contracts by tau/q per failure (far faster than the mesh
    size), so only a shared budget keeps the two runs in lockstep to the end.
    """
    frame0 = float(max(np.sqrt(mesh0), mesh0))
    mesh_history = run("mads", problem_factory(), budget, seed,
                       search=search, tau=tau_num / tau_den, frame0=frame0,
                       excl0=mesh0, excl_min=0.0)
    instance_history = run_orthomads_instance(
        problem_factory(), budget, seed, tau_num=tau_num, tau_den=tau_den,
        search=search, mesh0=mesh0, excl_min=0.0)
    return mesh_history, instance_history


def equivalence_report(mesh_history, instance_history):
    """Compare trial sequences and per-iteration parameters of the two runs."""
    a = mesh_history.trial_points()
    b = instance_history.trial_points()
    sequences_match = a.shape == b.shape and bool(np.array_equal(a, b))
    opts = instance_history.metadata["options"]
    mu, q = opts["mu"], opts["tau_den"]
    same_iters = len(mesh_history.iterations) == len(instance_history.iterations)
    max_mesh_err = 0.0
    max_frame_err = 0.0
    for mesh_it, inst_it in zip(mesh_history.iterations,
                                instance_history.iterations):
        implied = q ** inst_it.n_unsuccessful * inst_it.excl / mu
        max_mesh_err = max(max_mesh_err,
                           abs(mesh_it.excl - implied) / abs(mesh_it.excl))
        max_frame_err = max(max_frame_err,
                            abs(mesh_it.frame - inst_it.frame) / abs(mesh_it.frame))
    return {
        "sequences_match": sequences_match and same_iters,
        "n_evaluations": len(mesh_history.records),
        "n_iterations": len(mesh_history.iterations),
        "max_mesh_rel_err": max_mesh_err,
        "max_frame_rel_err": max_frame_err,
    }
