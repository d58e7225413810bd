"""Spatial primitives shared by the direct-search drivers.

The visited-point archive doubles as the index of the evaluation cache.
All distance queries are exact linear scans: membership decisions must be
reproducible, so no approximate pruning is allowed here.
"""

from dataclasses import dataclass

import numpy as np

# A candidate closer than this (relative) to an archived point is the same
# point for caching purposes and is never re-evaluated.
DUPLICATE_RTOL = 1e-13

NORMS = ("l2", "linf")
EXCLUSION_NORMS = ("l1", "l2", "linf")


def _check_vector(x, dim):
    x = np.asarray(x, dtype=float)
    if x.shape != (dim,):
        raise ValueError(f"expected a vector of length {dim}, got shape {x.shape}")
    return x


class VisitedSet:
    """Append-only archive of evaluated points with exact distance queries.

    Distance queries use the Euclidean norm by default; l1 and l-inf are
    supported for experimentation (performance is known to be insensitive to
    the choice).
    """

    def __init__(self, dim, duplicate_rtol=DUPLICATE_RTOL, norm="l2"):
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        if norm not in EXCLUSION_NORMS:
            raise ValueError(f"norm must be one of {EXCLUSION_NORMS}")
        self.dim = int(dim)
        self.duplicate_rtol = float(duplicate_rtol)
        self.norm = norm
        self._buf = np.empty((64, self.dim))
        self._size = 0

    def __len__(self):
        return self._size

    @property
    def points(self):
        """View of the archived points in insertion order."""
        return self._buf[: self._size]

    def append(self, x):
        """Archive ``x`` and return its index."""
        x = _check_vector(x, self.dim)
        if self._size == self._buf.shape[0]:
            grown = np.empty((2 * self._buf.shape[0], self.dim))
            grown[: self._size] = self._buf[: self._size]
            self._buf = grown
        self._buf[self._size] = x
        self._size += 1
        return self._size - 1

    def _distances(self, x):
        diff = self.points - x
        if self.norm == "l2":
            return np.sqrt(np.einsum("ij,ij->i", diff, diff))
        if self.norm == "l1":
            return np.abs(diff).sum(axis=1)
        return np.abs(diff).max(axis=1)

    def nearest(self, x):
        """Index and distance of the archived point closest to ``x``."""
        if self._size == 0:
            raise ValueError("archive is empty")
        x = _check_vector(x, self.dim)
        dist = self._distances(x)
        idx = int(np.argmin(dist))
        return idx, float(dist[idx])

    def min_distance(self, x):
        """Exact minimum distance from ``x`` to the archive, in the declared norm."""
        return self.nearest(x)[1]

    def in_punctured_space(self, x, excl_size):
        """True iff ``x`` is at distance >= ``excl_size`` from every archived point.

        The boundary is inclusive: a point exactly ``excl_size`` away is
        admissible.
        """
        if excl_size <= 0:
            raise ValueError("exclusion size must be positive")
        return self.min_distance(x) >= excl_size

    def duplicate_index(self, x):
        """Index of an archived point matching ``x`` up to the cache tolerance.

        Returns None when no archived point lies within
        ``duplicate_rtol * max(1, ||x||_inf)`` of ``x``.
        """
        if self._size == 0:
            return None
        x = _check_vector(x, self.dim)
        idx, dist = self.nearest(x)
        tol = self.duplicate_rtol * max(1.0, float(np.abs(x).max()))
        return idx if dist <= tol else None


@dataclass(frozen=True)
class PollDirections:
    """Ordered set of 2n normalized poll directions.

    ``directions`` has shape (2n, n); rows are interleaved as
    (h1, -h1, h2, -h2, ...).
    """

    directions: np.ndarray
    norm: str


def householder_directions(v, norm="l2"):
    """Positive spanning set from the Householder reflector of ``v``.

    ``v`` must be a unit vector (Euclidean norm 1 within 1e-12). The columns
    of H = I - 2 v v^T and their negations are returned, renormalized in the
    requested norm and interleaved (h1, -h1, h2, -h2, ...).
    """
    if norm not in NORMS:
        raise ValueError(f"norm must be one of {NORMS}")
    v = np.asarray(v, dtype=float)
    length = float(np.linalg.norm(v))
    if length == 0.0:
        raise ValueError("seed vector must be nonzero")
    if abs(length - 1.0) > 1e-12:
        raise ValueError("seed vector must have unit Euclidean length")
    n = v.size
    reflector = np.eye(n) - 2.0 * np.outer(v, v)
    out = np.empty((2 * n, n))
    for j in range(n):
        col = reflector[:, j]
        scale = np.linalg.norm(col) if norm == "l2" else np.abs(col).max()
        out[2 * j] = col / scale
        out[2 * j + 1] = -out[2 * j]
    return PollDirections(directions=out, norm=norm)


def _round_half_away(t):
    # np.round rounds half to even; mesh coordinates need half away from zero.
    return np.copysign(np.floor(np.abs(t) + 0.5), t)


@dataclass(frozen=True)
class MeshSpec:
    """Axis-aligned lattice of spacing ``size`` anchored at ``center``."""

    center: np.ndarray
    size: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.size <= 0:
            raise ValueError("mesh size must be positive")

    def project(self, x):
        """Closest mesh point to ``x``, ties rounding away from zero."""
        x = np.asarray(x, dtype=float)
        steps = _round_half_away((x - self.center) / self.size)
        return self.center + self.size * steps

    def contains(self, x, tol=1e-9):
        """True iff every coordinate of ``x`` sits on the lattice within ``tol``."""
        if tol < 0:
            raise ValueError("tolerance must be nonnegative")
        r = (np.asarray(x, dtype=float) - self.center) / self.size
        return bool(np.all(np.abs(r - _round_half_away(r)) <= tol))
