"""Tree-metric and ultrametric recognition, tripods and spheres."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import DEFAULT_TOL, FiniteMetricSpace, SubsetSelection


@dataclass(frozen=True)
class DefectWitness:
    """Magnitude of the worst violation and the tuple realizing it (``()`` if none)."""

    value: float
    witness: tuple[int, ...]

    def holds(self, tol: float = DEFAULT_TOL) -> bool:
        return self.value <= tol


def _finite(space: FiniteMetricSpace) -> np.ndarray:
    if not space.is_finite():
        raise ValueError("tree tests need finite distances; split into metric components first")
    return np.ascontiguousarray(space.d)


def gromov_tripod(space: FiniteMetricSpace, x: int, y: int, z: int, tol: float = DEFAULT_TOL):
    """Leg lengths of the tripod spanned by ``x, y, z``.

    The leg at ``x`` is the Gromov product ``(y|z)_x``; legs ending at each
    pair add back up to that pair's distance.  Slightly negative legs (within
    ``tol``) are clipped to zero, larger ones mean the triangle inequality fails.
    """
    if len({x, y, z}) != 3:
        raise ValueError("tripod needs three distinct points")
    d = space.d
    legs = (
        0.5 * (d[x, y] + d[x, z] - d[y, z]),
        0.5 * (d[y, x] + d[y, z] - d[x, z]),
        0.5 * (d[z, x] + d[z, y] - d[x, y]),
    )
    if min(legs) < -tol:
        raise ValueError(f"triangle inequality fails on ({x}, {y}, {z})")
    return tuple(max(float(leg), 0.0) for leg in legs)


def four_point_defect(space: FiniteMetricSpace) -> DefectWitness:
    """Worst gap between the two largest of the three pair sums over all 4-point subsets.

    Zero exactly when every quadruple satisfies the four-point condition.
    """
    value, witness = _backend.kernels.four_point_scan(_finite(space))
    return DefectWitness(float(value), tuple(witness))


def ultrametric_defect(space: FiniteMetricSpace) -> DefectWitness:
    """Worst excess ``d(x,z) - max(d(x,y), d(y,z))`` over ordered triples ``(x, y, z)``."""
    value, witness = _backend.kernels.ultra_scan(_finite(space))
    return DefectWitness(float(value), tuple(witness))


def sphere(space: FiniteMetricSpace, p: int, r: float, tol: float = DEFAULT_TOL) -> SubsetSelection:
    if not 0 <= p < space.n:
        raise IndexError(f"index {p} out of range")
    hits = np.flatnonzero(np.abs(space.d[p] - r) <= tol)
    return SubsetSelection(space, tuple(int(i) for i in hits))


def spheres(space: FiniteMetricSpace, tol: float = DEFAULT_TOL):
    """All spheres around realized distances, as ``(center, radius, selection)``."""
    out = []
    for p in range(space.n):
        for r in np.unique(space.d[p]):
            out.append((p, float(r), sphere(space, p, float(r), tol)))
    return out
