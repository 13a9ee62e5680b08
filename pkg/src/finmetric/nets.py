"""Nets, packings, packing numbers and doubling constants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import FiniteMetricSpace, SubsetSelection, selection

EXACT = "exact-maximum"
GREEDY = "greedy-lower-bound"


@dataclass(frozen=True)
class NetCheck:
    ok: bool
    radius: float
    witness: int | None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class PackingCertificate:
    """Points pairwise at distance ``>= eps``."""

    eps: float
    points: SubsetSelection
    kind: str

    @property
    def count(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class DoublingReport:
    ratio: float
    center: int
    radius: float


def _positive(eps):
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")


def is_eps_net(space: FiniteMetricSpace, S, eps: float) -> NetCheck:
    """Every point strictly closer than ``eps`` to some member of ``S``?

    On failure ``witness`` is a farthest point from ``S`` (smallest index on ties).
    """
    _positive(eps)
    sel = selection(space, S)
    if not len(sel):
        raise ValueError("empty candidate net")
    dist = space.d[:, list(sel.indices)].min(axis=1)
    far = int(np.argmax(dist))
    radius = float(dist[far])
    ok = radius < eps
    return NetCheck(ok, radius, None if ok else far)


def greedy_packing(space: FiniteMetricSpace, eps: float, seed=0) -> PackingCertificate:
    """Farthest-point insertion from a seeded start until no point is ``eps`` away.

    The result is a maximal eps-packing and therefore an eps-net.
    """
    _positive(eps)
    rng = np.random.default_rng(seed)
    start = int(rng.integers(space.n))
    chosen = [start]
    gap = space.d[start].copy()
    while True:
        nxt = int(np.argmax(gap))
        if not gap[nxt] >= eps:
            break
        chosen.append(nxt)
        gap = np.minimum(gap, space.d[nxt])
    return PackingCertificate(eps, SubsetSelection(space, tuple(chosen)), GREEDY)


def max_packing(space: FiniteMetricSpace, eps: float) -> PackingCertificate:
    """Maximum eps-packing by branch and bound on the conflict graph ``d < eps``."""
    _positive(eps)
    if space.n > 64:
        raise ValueError("exact packing supports at most 64 points")
    adj = space.d < eps
    np.fill_diagonal(adj, False)
    members, _ = _backend.kernels.mis_bb(np.ascontiguousarray(adj))
    return PackingCertificate(eps, SubsetSelection(space, tuple(members)), EXACT)


def packing_number(space: FiniteMetricSpace, eps: float, exact_limit: int = 20):
    """``(count, kind)``: exact maximum when ``n <= exact_limit``, else a greedy lower bound."""
    cert = max_packing(space, eps) if space.n <= exact_limit else greedy_packing(space, eps)
    return cert.count, cert.kind


def doubling_report(space: FiniteMetricSpace, weights) -> DoublingReport:
    """Largest ratio ``w(B(p, 2r)) / w(B(p, r))`` over centers and radii (open balls).

    Ball membership only changes when ``r`` or ``2r`` crosses a distance, so
    the supremum is attained at ``r`` equal to some distance or half
    distance, or beyond the diameter.  Ratios with an empty-weight inner
    ball are infinite.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (space.n,):
        raise ValueError("need one weight per point")
    if (w < 0).any():
        raise ValueError("weights must be nonnegative")
    if not w.sum() > 0:
        raise ValueError("weights must not all vanish")
    d = space.d
    dist = np.unique(d[d > 0])
    radii = np.unique(np.concatenate([dist, dist / 2.0, [2.0 * (dist.max() if dist.size else 0.0) + 1.0]]))
    best = DoublingReport(-np.inf, 0, float(radii[0]))
    for p in range(space.n):
        row = d[p]
        for r in radii:
            inner = w[row < r].sum()
            outer = w[row < 2.0 * r].sum()
            ratio = outer / inner if inner > 0 else np.inf
            if ratio > best.ratio:
                best = DoublingReport(float(ratio), p, float(r))
    return best
