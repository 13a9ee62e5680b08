"""Finite (pseudo-, infinity-) metric spaces and their basic operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _backend

DEFAULT_TOL = 1e-9


class ShapeError(ValueError):
    """Distance matrix is not square (or not two-dimensional)."""


class ValidationError(ValueError):
    """Input fails the metric axioms; ``report`` holds the details."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def _as_square(matrix) -> np.ndarray:
    d = np.array(matrix, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ShapeError(f"distance matrix must be square, got shape {d.shape}")
    if np.isnan(d).any():
        raise ValueError("distance matrix contains NaN")
    return d


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Pairwise distances over ``n`` indexed points.

    ``d`` is stored as a read-only float64 array; ``+inf`` entries are
    allowed (infinity-metrics).  Construction checks shape only, use
    :func:`validate` for the axioms.
    """

    d: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        d = np.ascontiguousarray(_as_square(self.d))
        if d.shape[0] == 0:
            raise ValueError("empty metric space")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != d.shape[0]:
                raise ValueError("need exactly one label per point")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.d, other.d)

    __hash__ = None

    def __repr__(self):
        return f"FiniteMetricSpace(n={self.n})"

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.d).all())


@dataclass(frozen=True)
class SubsetSelection:
    """Sorted, duplicate-free indices into an ambient space."""

    ambient: FiniteMetricSpace = field(repr=False)
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted({int(i) for i in self.indices}))
        for i in idx:
            if not 0 <= i < self.ambient.n:
                raise IndexError(f"index {i} out of range for a {self.ambient.n}-point space")
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i):
        return i in self.indices


def selection(space: FiniteMetricSpace, indices) -> SubsetSelection:
    """Coerce an iterable of indices (or an existing selection) to a SubsetSelection."""
    if isinstance(indices, SubsetSelection):
        if indices.ambient is not space and indices.ambient != space:
            raise ValueError("selection belongs to a different space")
        return indices
    return SubsetSelection(space, tuple(indices))


def as_space(x) -> FiniteMetricSpace:
    return x if isinstance(x, FiniteMetricSpace) else FiniteMetricSpace(x)


def _matrix(x) -> np.ndarray:
    return x.d if isinstance(x, FiniteMetricSpace) else _as_square(x)


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]
    defect: float
    count: int = 1


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`.

    ``ok`` is True exactly when ``violations`` is empty.  The quadrilateral
    inequality is informational and never affects ``ok``.
    """

    violations: tuple[Violation, ...] = ()
    quadrilateral: Violation | None = None
    quadrilateral_checked: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> list[str]:
        return [v.axiom for v in self.violations]


def _pair_witness(defect: np.ndarray, mask: np.ndarray):
    """Largest masked entry and its lexicographically first position."""
    vals = np.where(mask, defect, -np.inf)
    flat = int(np.argmax(vals))
    i, j = divmod(flat, defect.shape[1])
    return (i, j), float(vals[i, j]), int(mask.sum())


def validate(matrix, tol: float = DEFAULT_TOL, *, require_separation: bool = False,
             quadrilateral_limit: int = 40) -> ValidationReport:
    """Check the metric axioms on a raw square matrix.

    Reports nonnegativity, zero diagonal, symmetry and triangle violations,
    each with its worst witness.  Off-diagonal entries ``<= tol`` are
    pseudometric identifications and are reported (as ``separation``) only
    when ``require_separation`` is set.  The quadrilateral inequality is
    scanned for ``n <= quadrilateral_limit``.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if isinstance(matrix, FiniteMetricSpace):
        d = matrix.d
    else:
        d = _as_square(matrix)
    n = d.shape[0]
    violations = []
    if n == 0:
        return ValidationReport()

    neg = d < -tol
    if neg.any():
        w, val, c = _pair_witness(-d, neg)
        violations.append(Violation("nonnegativity", w, val, c))

    diag = np.abs(np.diag(d))
    bad = np.flatnonzero(diag > tol)
    if bad.size:
        i = int(bad[np.argmax(diag[bad])])
        violations.append(Violation("zero-diagonal", (i,), float(diag[i]), int(bad.size)))

    if require_separation and n > 1:
        off = ~np.eye(n, dtype=bool)
        close = off & (d <= tol) & np.triu(np.ones((n, n), dtype=bool), 1)
        if close.any():
            w, _, c = _pair_witness(-d, close)
            violations.append(Violation("separation", w, float(tol - d[w]), c))

    with np.errstate(invalid="ignore"):
        asym = np.abs(d - d.T)
    both_inf = np.isinf(d) & np.isinf(d.T) & (np.sign(d) == np.sign(d.T))
    asym[both_inf] = 0.0
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    sym_mask = upper & (asym > tol)
    if sym_mask.any():
        w, val, c = _pair_witness(asym, sym_mask)
        violations.append(Violation("symmetry", w, val, c))

    count, worst, wit = _backend.kernels.triangle_scan(np.ascontiguousarray(d), float(tol))
    if count:
        violations.append(Violation("triangle", tuple(wit), float(worst), int(count)))

    quad = None
    checked = n <= quadrilateral_limit
    if checked:
        qc, qworst, qwit = _backend.kernels.quad_scan(np.ascontiguousarray(d), float(tol))
        if qc:
            quad = Violation("quadrilateral", tuple(qwit), float(qworst), int(qc))
    return ValidationReport(tuple(violations), quad, checked)


def require_valid(x, tol: float = DEFAULT_TOL, *, require_separation: bool = False) -> FiniteMetricSpace:
    """Validate and wrap, raising :class:`ValidationError` on failure."""
    d = _matrix(x)
    report = validate(d, tol, require_separation=require_separation, quadrilateral_limit=0)
    if not report.ok:
        first = report.violations[0]
        raise ValidationError(
            f"not a metric: {first.axiom} violated at {first.witness} by {first.defect:.6g}", report)
    return x if isinstance(x, FiniteMetricSpace) else FiniteMetricSpace(d)


# -- decompositions -------------------------------------------------------------


def _components(adj: np.ndarray) -> list[list[int]]:
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    out = []
    for start in range(n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        stack = [start]
        while stack:
            v = stack.pop()
            for w in np.flatnonzero(adj[v] & ~seen):
                seen[w] = True
                comp.append(int(w))
                stack.append(int(w))
        out.append(sorted(comp))
    return out


def quotient_pseudometric(matrix, tol: float = DEFAULT_TOL):
    """Identify points at distance ``<= tol``.

    Returns ``(space, partition)``.  Each class is represented by its
    smallest index, classes are ordered by representative, and the quotient
    distance between classes is the distance between representatives.
    """
    space = require_valid(matrix, tol)
    d = space.d
    classes = _components(d <= tol)
    reps = [c[0] for c in classes]
    q = d[np.ix_(reps, reps)].copy()
    np.fill_diagonal(q, 0.0)
    labels = None if space.labels is None else tuple(space.labels[r] for r in reps)
    return FiniteMetricSpace(q, labels), classes


def metric_components(matrix) -> list[tuple[FiniteMetricSpace, list[int]]]:
    """Split an infinity-metric into classes of mutually finite distance."""
    space = require_valid(matrix)
    comps = _components(np.isfinite(space.d))
    return [(restrict(space, c), c) for c in comps]


# -- elementary constructions ----------------------------------------------------


def scale(space: FiniteMetricSpace, a: float) -> FiniteMetricSpace:
    if not a > 0:
        raise ValueError(f"scale factor must be positive, got {a}")
    return FiniteMetricSpace(space.d * a, space.labels)


def restrict(space: FiniteMetricSpace, sel) -> FiniteMetricSpace:
    """Induced metric on a subset of points."""
    idx = list(selection(space, sel).indices)
    if not idx:
        raise ValueError("cannot restrict to an empty selection")
    labels = None if space.labels is None else tuple(space.labels[i] for i in idx)
    return FiniteMetricSpace(space.d[np.ix_(idx, idx)], labels)


def diameter(space) -> float:
    d = _matrix(space)
    if d.shape[0] == 0:
        raise ValueError("diameter of an empty space")
    return float(d.max())


def eccentricity(space) -> np.ndarray:
    return _matrix(space).max(axis=1)


def midpoints(space: FiniteMetricSpace, x: int, y: int, eps: float = 0.0,
              tol: float = 0.0) -> SubsetSelection:
    """Points within ``d(x, y)/2 + eps`` of both ``x`` and ``y``.

    ``tol`` absorbs rounding in the comparison; with the defaults only exact
    midpoints qualify.
    """
    d = space.d
    for i in (x, y):
        if not 0 <= i < space.n:
            raise IndexError(f"index {i} out of range")
    r = 0.5 * d[x, y] + eps + tol
    hits = np.flatnonzero((d[x] <= r) & (d[y] <= r))
    return SubsetSelection(space, tuple(int(i) for i in hits))


def permute(space: FiniteMetricSpace, perm: Sequence[int]) -> FiniteMetricSpace:
    """Relabel points: point ``i`` of the result is point ``perm[i]`` of ``space``."""
    perm = list(perm)
    if sorted(perm) != list(range(space.n)):
        raise ValueError("not a permutation")
    return FiniteMetricSpace(space.d[np.ix_(perm, perm)])


def from_points(points: Iterable[Sequence[float]]) -> FiniteMetricSpace:
    """Euclidean distance matrix of a point cloud."""
    p = np.asarray(points, dtype=np.float64)
    if p.ndim == 1:
        p = p[:, None]
    diff = p[:, None, :] - p[None, :, :]
    return FiniteMetricSpace(np.sqrt((diff * diff).sum(axis=-1)))
