import numpy as np
import pytest

from ddsopt import Problem


def make_script(tmp_path, body, name="bb.sh"):
    path = tmp_path / name
    path.write_text(body)
    path.chmod(0o755)
    return str(path)


@pytest.fixture
def script_factory(tmp_path):
    def factory(body, name="bb.sh"):
        return make_script(tmp_path, body, name=name)
    return factory


def quadratic_problem(name="bowl", center=(0.0, 0.0), x0=(2.0, 1.0),
                      lower=None, upper=None):
    center = np.asarray(center, dtype=float)

    def objective(x):
        d = x - center
        return float(d @ d)

    return Problem(name, center.size, objective, lower=lower, upper=upper,
                   x0=x0)


def punctured_violation(history):
    """Worst shortfall of poll-evaluation distances versus the exclusion size.

    Boundary polls (true distance exactly the exclusion size) can recompute a
    few ulps short here because summation order differs from the archive's;
    callers allow a 1e-12 absolute slack.
    """
    points = history.trial_points()
    worst = np.inf
    for i, record in enumerate(history.records):
        if record.phase != "poll" or i == 0:
            continue
        gaps = points[:i] - record.point
        dist = float(np.sqrt((gaps * gaps).sum(axis=1).min()))
        worst = min(worst, dist - record.excl)
    return worst


def mesh_integrality_error(history, x0):
    """Largest deviation of (x - x0)/mesh_min from integrality."""
    mesh_min = min(stats.excl for stats in history.iterations)
    worst = 0.0
    for record in history.records:
        ratio = (record.point - x0) / mesh_min
        worst = max(worst, float(np.abs(ratio - np.round(ratio)).max()))
    return worst
