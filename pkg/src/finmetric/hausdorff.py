"""Hausdorff distance inside a finite space, and between planar clouds and their hulls."""

from __future__ import annotations

import numpy as np

from .core import FiniteMetricSpace, selection


def _nonempty(space, A, what="set"):
    sel = selection(space, A)
    if not len(sel):
        raise ValueError(f"empty {what}")
    return list(sel.indices)


def set_distance_function(space: FiniteMetricSpace, A) -> np.ndarray:
    """Distance from every point of ``space`` to the subset ``A``."""
    idx = _nonempty(space, A)
    return space.d[:, idx].min(axis=1)


def hausdorff_distance(space: FiniteMetricSpace, A, B) -> float:
    """Largest gap between the distance functions of ``A`` and ``B`` over the whole space."""
    fa = set_distance_function(space, A)
    fb = set_distance_function(space, B)
    with np.errstate(invalid="ignore"):
        gap = np.abs(fa - fb)
    gap[np.isinf(fa) & np.isinf(fb)] = 0.0
    return float(gap.max())


def directed_hausdorff(space: FiniteMetricSpace, A, B) -> float:
    """``max_{a in A} dist(a, B)``."""
    a = _nonempty(space, A)
    b = _nonempty(space, B)
    return float(space.d[np.ix_(a, b)].min(axis=1).max())


def neighborhood_radius(space: FiniteMetricSpace, A, B) -> float:
    """Smallest realized ``R`` with each set inside the closed R-neighborhood of the other."""
    a = _nonempty(space, A)
    b = _nonempty(space, B)
    sub = space.d[np.ix_(a, b)]
    for R in np.unique(np.concatenate([[0.0], sub.ravel()])):
        if (sub <= R).any(axis=1).all() and (sub <= R).any(axis=0).all():
            return float(R)
    return float("inf")


# -- planar clouds ----------------------------------------------------------------


def planar_cloud(points) -> np.ndarray:
    """Deduplicated ``(m, 2)`` float array (first-occurrence order)."""
    p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if p.shape[0] == 0:
        raise ValueError("empty planar cloud")
    if not np.isfinite(p).all():
        raise ValueError("planar coordinates must be finite")
    _, first = np.unique(p, axis=0, return_index=True)
    return p[np.sort(first)]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Counterclockwise hull vertices (monotone chain); collinear points are dropped."""
    pts = sorted(map(tuple, planar_cloud(points)))
    if len(pts) <= 2:
        return np.array(pts, dtype=np.float64).reshape(-1, 2)
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1], dtype=np.float64)


def _segment_distance(q, a, b):
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0 else min(1.0, max(0.0, float((q - a) @ ab) / denom))
    return float(np.hypot(*(q - (a + t * ab))))


def point_polygon_distance(q, hull: np.ndarray) -> float:
    """Distance from ``q`` to the solid convex polygon with ccw vertices ``hull`` (0 inside)."""
    q = np.asarray(q, dtype=np.float64)
    m = hull.shape[0]
    if m == 1:
        return float(np.hypot(*(q - hull[0])))
    if m >= 3 and all(_cross(hull[i], hull[(i + 1) % m], q) >= 0 for i in range(m)):
        return 0.0
    return min(_segment_distance(q, hull[i], hull[(i + 1) % m]) for i in range(m if m >= 3 else 1))


def planar_hausdorff(A, B, as_hulls: bool = False) -> float:
    """Hausdorff distance between two planar clouds, or between their filled convex hulls.

    For hulls the distance to a convex polygon is convex along the other
    polygon, so checking vertices against the opposite polygon suffices.
    """
    a = planar_cloud(A)
    b = planar_cloud(B)
    if not as_hulls:
        diff = a[:, None, :] - b[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=-1))
        return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))
    ha, hb = convex_hull(a), convex_hull(b)
    return max(
        max(point_polygon_distance(v, hb) for v in ha),
        max(point_polygon_distance(v, ha) for v in hb),
    )
