"""Admissible and extremal functions, and the tight span they form.

A function ``f`` on a finite space is admissible when ``f(x) + f(y) >= d(x, y)``
for all pairs (``x == y`` included, so ``f >= 0``).  It is extremal when it
is a minimal admissible function.  On a finite space that is the same as
every value being tight: ``f(p) = max_q (d(p, q) - f(q))``.  The extremal
functions with the sup-norm form the tight span (injective envelope).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import DEFAULT_TOL, FiniteMetricSpace


class PreconditionError(ValueError):
    """An operation was handed a function outside its domain (e.g. not admissible)."""


@dataclass(frozen=True, eq=False)
class PointFunction:
    """One real value per point of ``base``; behaves like a read-only array."""

    base: FiniteMetricSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.shape != (self.base.n,):
            raise ValueError(f"need {self.base.n} values, got shape {v.shape}")
        if not np.isfinite(v).all():
            raise ValueError("point function values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return self.base.n

    def __iter__(self):
        return iter(self.values)

    def tolist(self):
        return self.values.tolist()


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: tuple[int, ...]
    defect: float

    def __bool__(self):
        return self.ok


def _values(space: FiniteMetricSpace, f) -> np.ndarray:
    v = np.asarray(getattr(f, "values", f), dtype=np.float64)
    if v.shape != (space.n,):
        raise ValueError(f"need {space.n} values, got shape {v.shape}")
    return v


def distance_function(space: FiniteMetricSpace, p: int) -> PointFunction:
    """``x -> d(p, x)``, the image of ``p`` in the tight span."""
    return PointFunction(space, space.d[p])


def kuratowski(space: FiniteMetricSpace) -> list[PointFunction]:
    return [distance_function(space, p) for p in range(space.n)]


def is_admissible(space: FiniteMetricSpace, f, tol: float = DEFAULT_TOL) -> Check:
    """Worst pair ``(i <= j)`` by ``d(i, j) - f(i) - f(j)``."""
    v = _values(space, f)
    short = space.d - v[:, None] - v[None, :]
    short = np.where(np.tril(np.ones_like(short, dtype=bool), -1), -np.inf, short)
    flat = int(np.argmax(short))
    i, j = divmod(flat, space.n)
    worst = float(short[i, j])
    if worst > tol:
        return Check(False, (i, j), worst)
    return Check(True, (), max(worst, 0.0))


def tightness_slack(space: FiniteMetricSpace, f) -> np.ndarray:
    """``f(p) - max_q (d(p, q) - f(q))`` per point (``q = p`` included)."""
    v = _values(space, f)
    return v - (space.d - v[None, :]).max(axis=1)


def is_extremal(space: FiniteMetricSpace, f, tol: float = DEFAULT_TOL) -> Check:
    """Extremality by the tightness criterion; the witness is the slackest point."""
    adm = is_admissible(space, f, tol)
    if not adm:
        raise PreconditionError(f"function is not admissible at {adm.witness}")
    slack = tightness_slack(space, f)
    p = int(np.argmax(slack))
    if slack[p] > tol:
        return Check(False, (p,), float(slack[p]))
    return Check(True, (), max(float(slack[p]), 0.0))


def extremal_below(space: FiniteMetricSpace, f, tol: float = DEFAULT_TOL) -> PointFunction:
    """Extremal function ``g <= f`` by cyclic coordinate descent.

    Sweeps points in ascending order, lowering each value to
    ``max(max_{q != p} (d(p, q) - g(q)), 0)`` (ties resolve to the first
    ``q``, which does not affect the value).  Once a point is tight it stays
    tight, so one sweep reaches the fixed point; further sweeps only mop up
    rounding.
    """
    adm = is_admissible(space, f, tol)
    if not adm:
        raise PreconditionError(f"function is not admissible at {adm.witness}")
    g = _values(space, f).copy()
    d = space.d
    n = space.n
    for _ in range(n + 1):
        changed = False
        for p in range(n):
            reach = d[p] - g
            reach[p] = 0.0
            new = min(g[p], reach.max())
            if new < g[p]:
                g[p] = new
                changed = True
        if not changed:
            break
    return PointFunction(space, _lipschitz_repair(d, g))


def _lipschitz_repair(d: np.ndarray, g: np.ndarray, rounds: int = 64) -> np.ndarray:
    """Lower values by ulps until ``g(p) - g(q) <= d(p, q)`` holds in floating point.

    Lowering keeps ``g`` below the input; admissibility can lose a few ulps.
    """
    for _ in range(rounds):
        high = ((g[:, None] - g[None, :]) > d).any(axis=1)
        if not high.any():
            break
        cap = (g[None, :] + d)[high].min(axis=1)
        g[high] = np.nextafter(np.minimum(g[high], cap), -np.inf)
    return g


def inj_distance(f, g) -> float:
    """Sup-norm distance between two functions on the same space."""
    a = np.asarray(getattr(f, "values", f), dtype=np.float64)
    b = np.asarray(getattr(g, "values", g), dtype=np.float64)
    return float(np.abs(a - b).max())


def random_admissible(space: FiniteMetricSpace, rng: np.random.Generator) -> PointFunction:
    """Random convex combination of distance functions plus a nonnegative bump.

    Admissible by construction: the constraints are linear and every
    distance function satisfies them.
    """
    w = rng.dirichlet(np.full(space.n, 0.5))
    base = w @ space.d
    scale = rng.choice([0.0, 0.1, 0.5]) * (float(space.d.max()) or 1.0)
    return PointFunction(space, base + scale * rng.random(space.n))


def _dedup(found: list[np.ndarray], v: np.ndarray, tol: float) -> bool:
    return all(np.abs(u - v).max() > tol for u in found)


def sample_tight_span(space: FiniteMetricSpace, count: int, seed=0,
                      tol: float = DEFAULT_TOL, max_tries: int | None = None) -> list[PointFunction]:
    """``count`` distinct extremal functions.

    Distance functions come first (up to ``count``), then extremal
    functions below random admissible ones, deduplicated at ``tol``.  Fewer
    than ``count`` are returned only if ``max_tries`` random draws cannot
    produce new ones (e.g. a one-point space).
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    found: list[np.ndarray] = []
    for p in range(space.n):
        if len(found) == count:
            break
        v = space.d[p].copy()
        if _dedup(found, v, tol):
            found.append(v)
    tries = 0
    limit = max_tries if max_tries is not None else 50 * count + 100
    while len(found) < count and tries < limit:
        tries += 1
        v = extremal_below(space, random_admissible(space, rng), tol).values
        if _dedup(found, v, tol):
            found.append(np.array(v))
    return [PointFunction(space, v) for v in found]


def tight_span_vertices(space: FiniteMetricSpace, tol: float = DEFAULT_TOL, max_n: int = 6) -> list[PointFunction]:
    """Vertices of the polyhedron of admissible functions (all extremal), for ``n <= max_n``.

    A vertex makes ``n`` linearly independent admissibility constraints
    tight; each candidate system is solved and kept if admissible.
    """
    n = space.n
    if n > max_n:
        raise ValueError(f"vertex enumeration limited to {max_n} points")
    rows = [(i, j) for i in range(n) for j in range(i, n)]
    A = np.zeros((len(rows), n))
    b = np.zeros(len(rows))
    for r, (i, j) in enumerate(rows):
        A[r, i] += 1.0
        A[r, j] += 1.0
        b[r] = space.d[i, j]
    combos = np.array(list(combinations(range(len(rows)), n)))
    mats = A[combos]
    det = np.linalg.det(mats)
    keep = np.abs(det) > 0.5
    sols = np.linalg.solve(mats[keep], b[combos[keep]][..., None])[..., 0]
    out: list[np.ndarray] = []
    for v in sols:
        if (A @ v - b >= -tol).all() and _dedup(out, v, tol):
            out.append(v)
    out.sort(key=lambda v: tuple(np.round(v, 9)))
    return [PointFunction(space, v) for v in out]


def realizing_point(space: FiniteMetricSpace, r, tol: float = DEFAULT_TOL) -> int | None:
    """A point ``p`` with ``d(p, x) <= r(x) + tol`` for all ``x``, if any."""
    v = _values(space, r)
    ok = (space.d <= v[None, :] + tol).all(axis=1)
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size else None


def hyperconvexity_witness(space: FiniteMetricSpace, tol: float = DEFAULT_TOL,
                           samples: int = 64, seed=0) -> PointFunction | None:
    """An extremal function no point of the space realizes, or ``None``.

    Candidates, in order: vertices of the tight span, midpoints of vertex
    pairs that are still extremal (points on edges), then random samples.
    Vertex enumeration is skipped above six points.
    """
    candidates: list[np.ndarray] = []
    if space.n <= 6:
        verts = [v.values for v in tight_span_vertices(space, tol)]
        candidates.extend(verts)
        for a, b in combinations(verts, 2):
            mid = 0.5 * (a + b)
            if is_extremal(space, mid, tol):
                candidates.append(mid)
    candidates.extend(v.values for v in sample_tight_span(space, max(samples, 1), seed, tol))
    for r in candidates:
        if realizing_point(space, r, tol) is None:
            return PointFunction(space, r)
    return None


def tripod_coordinates(f, tol: float = DEFAULT_TOL):
    """For the unit equilateral triangle: ``(leg, x)`` with ``f = 1/2 + x`` off the leg and ``1/2 - x`` on it.

    ``leg`` is ``None`` at the center (``x == 0``).
    """
    v = np.asarray(getattr(f, "values", f), dtype=np.float64)
    leg = int(np.argmin(v))
    x = 0.5 - float(v[leg])
    if x <= tol:
        return None, max(x, 0.0)
    return leg, x
