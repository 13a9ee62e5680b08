"""Gromov-Hausdorff distance between small finite spaces.

On finite spaces the distance equals half the least distortion of a
correspondence, and the minimum is attained; :func:`gh_exact` returns that
attained value together with an optimal correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .core import FiniteMetricSpace, ValidationError, diameter, eccentricity, validate

DEFAULT_BUDGET = 10_000_000
GLUE_FLOOR = 1e-12


@dataclass(frozen=True)
class Correspondence:
    """Relation between the points of X and Y, total on both sides."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted({(int(i), int(j)) for i, j in self.pairs}))
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def identity(cls, n: int) -> "Correspondence":
        return cls(tuple((i, i) for i in range(n)))

    @classmethod
    def full(cls, m: int, k: int) -> "Correspondence":
        return cls(tuple((i, j) for i in range(m) for j in range(k)))

    @classmethod
    def from_map(cls, f: Sequence[int], k: int | None = None) -> "Correspondence":
        """Graph of ``f``; only total on Y when ``f`` is onto."""
        return cls(tuple(enumerate(f)))

    def check(self, m: int, k: int):
        xs = {i for i, _ in self.pairs}
        ys = {j for _, j in self.pairs}
        if any(not 0 <= i < m for i in xs) or any(not 0 <= j < k for j in ys):
            raise ValueError("correspondence index out of range")
        if len(xs) != m or len(ys) != k:
            raise ValueError("correspondence must cover every point of both spaces")

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


@dataclass(frozen=True)
class GhResult:
    value: float
    optimal: Correspondence
    nodes_explored: int
    exact: bool


@dataclass(frozen=True)
class GhPrimeResult:
    value: float
    map_xy: tuple[int, ...]
    map_yx: tuple[int, ...]
    exact: bool


def _finite(space: FiniteMetricSpace, name: str) -> np.ndarray:
    if not space.is_finite():
        raise ValueError(f"{name} has infinite distances")
    return np.ascontiguousarray(space.d)


def _as_corr(R) -> Correspondence:
    return R if isinstance(R, Correspondence) else Correspondence(tuple(R))


def distortion(X: FiniteMetricSpace, Y: FiniteMetricSpace, R) -> float:
    """``max |d_X(x, x') - d_Y(y, y')|`` over pairs of related pairs."""
    R = _as_corr(R)
    R.check(X.n, Y.n)
    xs = np.array([i for i, _ in R.pairs])
    ys = np.array([j for _, j in R.pairs])
    return float(np.abs(X.d[np.ix_(xs, xs)] - Y.d[np.ix_(ys, ys)]).max())


def map_distortion(X: FiniteMetricSpace, Y: FiniteMetricSpace, f: Sequence[int]) -> float:
    f = np.asarray(f, dtype=int)
    if f.shape != (X.n,) or (f < 0).any() or (f >= Y.n).any():
        raise ValueError("map must send every point of X to a point of Y")
    return float(np.abs(X.d - Y.d[np.ix_(f, f)]).max())


def net_radius(Y: FiniteMetricSpace, image: Iterable[int]) -> float:
    """How far the farthest point of Y is from ``image``."""
    idx = sorted(set(int(i) for i in image))
    return float(Y.d[:, idx].min(axis=1).max())


# -- bounds -----------------------------------------------------------------------


def diameter_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    return 0.5 * abs(diameter(X) - diameter(Y))


def eccentricity_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """Half the Hausdorff distance between the eccentricity value sets.

    Related points have eccentricities within the distortion of each
    other, and every point is related to something.
    """
    ex = eccentricity(X)
    ey = eccentricity(Y)
    gap = np.abs(ex[:, None] - ey[None, :])
    return 0.5 * float(max(gap.min(axis=1).max(), gap.min(axis=0).max()))


def sorted_distance_heuristic(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float | None:
    """Half the largest gap between the sorted distance lists of equal-size spaces.

    Not a lower bound in general: a non-bijective correspondence can beat
    it (two tight pairs against a tight triple plus an outlier).  ``None``
    when the sizes differ.
    """
    if X.n != Y.n:
        return None
    iu = np.triu_indices(X.n, 1)
    sx = np.sort(X.d[iu])
    sy = np.sort(Y.d[iu])
    return 0.5 * float(np.abs(sx - sy).max()) if sx.size else 0.0


def gh_lower_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """Certified lower bound: max of the diameter and eccentricity bounds."""
    return max(diameter_bound(X, Y), eccentricity_bound(X, Y))


def gh_upper_from_map(X: FiniteMetricSpace, Y: FiniteMetricSpace, f: Sequence[int],
                      eps_net_radius: float | None = None) -> float:
    """Upper bound on the GH distance from a map ``f: X -> Y``.

    Relates each ``x`` to ``f(x)`` and each ``y`` to a nearest point of
    ``f(X)``'s preimage, and returns half the distortion of that
    correspondence.  This never exceeds ``dis(f)/2 + r`` where ``r`` is the
    net radius of ``f(X)``; ``eps_net_radius`` may supply ``r`` when known,
    but the nearest-point choice is always recomputed.
    """
    f = [int(v) for v in f]
    map_distortion(X, Y, f)
    image = sorted(set(f))
    pre = {}
    for x, y in enumerate(f):
        pre.setdefault(y, x)
    img = np.array(image)
    pairs = [(x, y) for x, y in enumerate(f)]
    for y in range(Y.n):
        if y in pre:
            continue
        near = int(img[np.argmin(Y.d[y, img])])
        pairs.append((pre[near], y))
    return 0.5 * distortion(X, Y, Correspondence(tuple(pairs)))


def isometry_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace, f: Sequence[int]) -> float:
    """``max(dis f, net radius of f(X))``: the eps for which ``f`` is an eps-isometry (closed form)."""
    return max(map_distortion(X, Y, f), net_radius(Y, f))


# -- exact search -------------------------------------------------------------------


def _slot_order(X, Y):
    ex = eccentricity(X)
    ey = eccentricity(Y)
    xs = [(0, int(i)) for i in np.lexsort((np.arange(X.n), -ex))]
    ys = [(1, int(j)) for j in np.lexsort((np.arange(Y.n), -ey))]
    return ys + xs if Y.n > X.n else xs + ys


def gh_exact(X: FiniteMetricSpace, Y: FiniteMetricSpace, budget: int = DEFAULT_BUDGET) -> GhResult:
    """Exact GH distance by branch and bound over correspondences.

    Every correspondence contains one built from a partner choice for each
    point of X and each point of Y, with no larger distortion, so the
    search assigns one partner per point.  Points of the larger space go
    first, by decreasing eccentricity; options are tried in increasing
    incremental cost and a node is cut when the largest cheapest-option
    cost among unassigned points reaches the incumbent.  If ``budget``
    nodes are used up the best correspondence found so far is returned
    with ``exact=False``.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    dx = _finite(X, "X")
    dy = _finite(Y, "Y")
    slots = _slot_order(X, Y)
    target = 2.0 * gh_lower_bound(X, Y)
    best, choice, nodes, complete = _backend.kernels.correspondence_bb(
        dx, dy, slots, True, int(budget), float("inf"), target)
    pairs = [(p, o) if side == 0 else (o, p) for (side, p), o in zip(slots, choice)]
    return GhResult(0.5 * best + 0.0, Correspondence(tuple(pairs)), int(nodes), bool(complete))


def _expansion_defect(X, Y, budget):
    dx = _finite(X, "X")
    dy = _finite(Y, "Y")
    ex = eccentricity(X)
    slots = [(0, int(i)) for i in np.lexsort((np.arange(X.n), -ex))]
    target = max(0.0, diameter(X) - diameter(Y))
    best, choice, nodes, complete = _backend.kernels.correspondence_bb(
        dx, dy, slots, False, int(budget), float("inf"), target)
    f = [0] * X.n
    for (_, p), o in zip(slots, choice):
        f[p] = o
    return max(best, 0.0) + 0.0, tuple(f), complete


def gh_prime(X: FiniteMetricSpace, Y: FiniteMetricSpace, budget: int = DEFAULT_BUDGET) -> GhPrimeResult:
    """Least ``eps`` with maps ``X -> Y`` and ``Y -> X`` each shrinking no distance by more than ``eps``."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    a, fxy, ca = _expansion_defect(X, Y, budget)
    b, fyx, cb = _expansion_defect(Y, X, budget)
    return GhPrimeResult(max(a, b), fxy, fyx, ca and cb)


# -- gluing -----------------------------------------------------------------------------


def glue_along(X: FiniteMetricSpace, Y: FiniteMetricSpace, R, floor: float = GLUE_FLOOR):
    """Metric on the disjoint union of X and Y realizing ``R`` at offset ``delta``.

    ``d(x, y) = min over (x', y') in R of d_X(x, x') + delta + d_Y(y', y)``
    with ``delta = max(dis(R)/2, floor)``.  Returns ``(Z, x_indices,
    y_indices)``; both copies sit inside Z within Hausdorff distance delta.
    """
    R = _as_corr(R)
    dx = _finite(X, "X")
    dy = _finite(Y, "Y")
    delta = max(0.5 * distortion(X, Y, R), floor)
    m, k = X.n, Y.n
    cross = np.full((m, k), np.inf)
    for a, b in R.pairs:
        cross = np.minimum(cross, dx[:, a][:, None] + delta + dy[b, :][None, :])
    z = np.zeros((m + k, m + k))
    z[:m, :m] = dx
    z[m:, m:] = dy
    z[:m, m:] = cross
    z[m:, :m] = cross.T
    Z = FiniteMetricSpace(z)
    report = validate(Z, 1e-12, quadrilateral_limit=0)
    if not report.ok:
        raise ValidationError("glued space is not a metric", report)
    return Z, list(range(m)), list(range(m, m + k))
