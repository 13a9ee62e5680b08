"""Growing finite approximations of (capped) Urysohn spaces, and back-and-forth matching."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import FiniteMetricSpace, selection
from .injective import PreconditionError

EXACT_TOL = 1e-12


@dataclass(frozen=True)
class HistoryEntry:
    subset: tuple[int, ...]
    values: tuple[float, ...]


@dataclass
class GrowthState:
    """An expanding space plus how each added point was specified.

    Owned by one caller at a time; :func:`grow` returns a new state and
    leaves the old one untouched.
    """

    space: FiniteMetricSpace
    d_cap: float = float("inf")
    history: list[HistoryEntry] = field(default_factory=list)
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0), repr=False)

    @property
    def n(self) -> int:
        return self.space.n

    def to_json(self) -> dict:
        d = self.space.d
        return {
            "n": self.n,
            "d": [[v if np.isfinite(v) else "inf" for v in row] for row in d.tolist()],
            "d_cap": self.d_cap if np.isfinite(self.d_cap) else "inf",
            "history": [{"subset": list(h.subset), "values": list(h.values)} for h in self.history],
            "rng_state": self.rng.bit_generator.state,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GrowthState":
        d = np.array([[float(v) for v in row] for row in data["d"]])
        rng = np.random.default_rng()
        if "rng_state" in data:
            rng.bit_generator.state = data["rng_state"]
        return cls(
            FiniteMetricSpace(d),
            float(data.get("d_cap", "inf")),
            [HistoryEntry(tuple(h["subset"]), tuple(h["values"])) for h in data.get("history", [])],
            rng,
        )


def new_state(d_cap: float = float("inf"), seed=0) -> GrowthState:
    """One-point start."""
    if not d_cap > 0:
        raise ValueError("d_cap must be positive")
    return GrowthState(FiniteMetricSpace([[0.0]]), float(d_cap), [], np.random.default_rng(seed))


def extension_check(space: FiniteMetricSpace, F, f, d_cap: float = float("inf"),
                    tol: float = EXACT_TOL) -> str | None:
    """Reason ``f`` on ``F`` is not a (capped) extension function, or ``None``."""
    idx = list(selection(space, F).indices)
    v = np.asarray(f, dtype=np.float64)
    if v.shape != (len(idx),):
        return "need one value per subset point"
    if not np.isfinite(v).all() or (v < -tol).any():
        return "values must be finite and nonnegative"
    if (v > d_cap + tol).any():
        return "value exceeds the cap"
    sub = space.d[np.ix_(idx, idx)]
    if (np.abs(v[:, None] - v[None, :]) > sub + tol).any():
        return "not 1-Lipschitz"
    if (v[:, None] + v[None, :] < sub - tol).any():
        return "pair sum below distance"
    return None


def _project(v, sub, d_cap, rounds=60):
    """Alternate Lipschitz lowering, capping and admissibility raising until stable."""
    for _ in range(rounds):
        old = v
        v = (v[None, :] + sub).min(axis=1)
        v = np.minimum(v, d_cap)
        v = np.maximum(v, (sub - v[None, :]).max(axis=1))
        if np.abs(v - old).max() <= 1e-15:
            break
    return v


def random_extension_function(space: FiniteMetricSpace, F, d_cap: float = float("inf"),
                              seed=None) -> np.ndarray:
    """Random capped extension function on the subset ``F`` (values in subset order).

    Starts from the distance to a random pivot of ``F`` plus a random
    shift, jitters every value, then alternates Lipschitz lowering, capping
    and admissibility raising until stable.  If that does not settle on a
    strictly positive extension function, the capped unjittered start is
    used instead, or the constant ``d_cap`` when even that is infeasible
    (possible only when the cap is below the subset diameter).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    idx = list(selection(space, F).indices)
    if not idx:
        raise ValueError("empty subset")
    sub = space.d[np.ix_(idx, idx)]
    diam = float(sub.max())
    if d_cap < 0.5 * diam:
        raise ValueError(f"cap {d_cap} is below half the subset diameter {diam}")
    top = d_cap if np.isfinite(d_cap) else diam + 1.0
    pivot = int(rng.integers(len(idx)))
    start = np.minimum(sub[pivot] + rng.uniform(0.0, top) + 1e-9 * top, d_cap)
    v = _project(start + rng.uniform(-0.25, 0.25, size=len(idx)) * top, sub, d_cap)
    for cand in (v, start):
        if cand.min() > 0 and extension_check(space, idx, cand, d_cap) is None:
            return cand
    return np.full(len(idx), float(d_cap))


def _new_row(d: np.ndarray, idx, v, d_cap):
    row = (v[:, None] + d[idx, :]).min(axis=0)
    row = np.minimum(row, d_cap)
    row[idx] = v
    return row


def extension_violation(d: np.ndarray, row: np.ndarray) -> float:
    """Worst triangle defect among triangles through the new point.

    Together with validity of ``d`` this covers every triangle of the grown space.
    """
    via = row[:, None] + d
    a = float((row[None, :] - via.min(axis=0)).max())
    b = float((d - (row[:, None] + row[None, :])).max())
    return max(a, b, 0.0)


def grow(state: GrowthState, F, f, tol: float = 1e-9) -> GrowthState:
    """Append a point at distances ``f`` from ``F``.

    Other points get the shortest-path distance through ``F``, capped:
    ``min(d_cap, min_a f(a) + d(a, x))``.
    """
    space = state.space
    idx = list(selection(space, F).indices)
    v = np.asarray(f, dtype=np.float64)
    reason = extension_check(space, idx, v, state.d_cap, tol)
    if reason is not None:
        raise PreconditionError(f"not an extension function: {reason}")
    d = space.d
    row = _new_row(d, idx, v, state.d_cap)
    if extension_violation(d, row) > EXACT_TOL:
        raise RuntimeError("grown space violates the triangle inequality")
    n = space.n
    z = np.empty((n + 1, n + 1))
    z[:n, :n] = d
    z[n, :n] = row
    z[:n, n] = row
    z[n, n] = 0.0
    entry = HistoryEntry(tuple(idx), tuple(float(x) for x in v))
    return GrowthState(FiniteMetricSpace(z), state.d_cap, state.history + [entry], state.rng)


def _random_subset(rng, pool: int, max_size: int):
    size = int(rng.integers(1, min(max_size, pool) + 1))
    return sorted(int(i) for i in rng.choice(pool, size=size, replace=False))


def random_grow(state: GrowthState, steps: int, max_subset: int = 6, callback=None) -> GrowthState:
    """Apply ``steps`` random one-point extensions drawn from the state's generator.

    Subset sizes are uniform on ``1..max_subset``, then the subset is uniform
    among those of that size.  ``callback(state)`` runs after every step.
    """
    for _ in range(steps):
        F = _random_subset(state.rng, state.n, max_subset)
        f = random_extension_function(state.space, F, state.d_cap, state.rng)
        state = grow(state, F, f)
        if callback is not None:
            callback(state)
    return state


def extension_defect(space: FiniteMetricSpace, F, f) -> float:
    """``min_p max_{a in F} |d(p, a) - f(a)|``: how well the best existing point realizes ``f``."""
    idx = list(selection(space, F).indices)
    v = np.asarray(f, dtype=np.float64)
    return float(np.abs(space.d[:, idx] - v[None, :]).max(axis=1).min())


@dataclass(frozen=True)
class ExtensionStats:
    success_rate: float
    worst_defect: float
    defects: tuple[float, ...]

    def rate_at(self, tol: float) -> float:
        return float(np.mean(np.asarray(self.defects) <= tol))


def extension_property_stats(space, trials: int, tol: float, seed=0, d_cap: float | None = None,
                             pool: int | None = None, max_subset: int = 6) -> ExtensionStats:
    """Fraction of random ``(F, f)`` realized within ``tol`` by an existing point.

    Subsets come from the first ``pool`` points (all by default), so with a
    fixed ``pool`` and seed the trial schedule does not depend on how far
    the space has grown.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if isinstance(space, GrowthState):
        d_cap = space.d_cap if d_cap is None else d_cap
        space = space.space
    d_cap = float("inf") if d_cap is None else d_cap
    pool = space.n if pool is None else min(pool, space.n)
    rng = np.random.default_rng(seed)
    defects = []
    for _ in range(trials):
        F = _random_subset(rng, pool, max_subset)
        f = random_extension_function(space, F, d_cap, rng)
        defects.append(extension_defect(space, F, f))
    defects = np.array(defects)
    return ExtensionStats(float(np.mean(defects <= tol)), float(defects.max()), tuple(defects.tolist()))


# -- back and forth -------------------------------------------------------------------


@dataclass(frozen=True)
class PartialIsometry:
    pairs: tuple[tuple[int, int], ...] = ()
    max_defect: float = 0.0

    @classmethod
    def build(cls, X: FiniteMetricSpace, Y: FiniteMetricSpace, pairs) -> "PartialIsometry":
        pairs = tuple((int(a), int(b)) for a, b in pairs)
        xs = [a for a, _ in pairs]
        ys = [b for _, b in pairs]
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValueError("partial isometry must be injective both ways")
        if not pairs:
            return cls((), 0.0)
        gap = np.abs(X.d[np.ix_(xs, xs)] - Y.d[np.ix_(ys, ys)])
        return cls(pairs, float(gap.max()))


def _pair_cost(dsrc, ddst, src_list, dst_list, s):
    if not src_list:
        return np.zeros(ddst.shape[0])
    return np.abs(dsrc[s, src_list][None, :] - ddst[:, dst_list]).max(axis=1)


def _profile_gap(row, dst):
    """Hausdorff distance between the value set of ``row`` and of each row of ``dst``."""
    gap = np.abs(row[None, :, None] - dst[:, None, :])
    return np.maximum(gap.min(axis=2).max(axis=1), gap.min(axis=1).max(axis=1))


def back_and_forth(X: FiniteMetricSpace, Y: FiniteMetricSpace, start: PartialIsometry | None = None,
                   steps: int | None = None, seed=None, tol: float = 1e-9) -> PartialIsometry:
    """Greedy back-and-forth extension of a partial isometry.

    Odd steps take the first unmatched point of X, even steps the first
    unmatched point of Y, and pair it with the unmatched point on the other
    side that keeps the largest defect smallest.  Ties go to the smallest
    local defect, then to the most similar distance profile (Hausdorff gap
    between the two rows of distances, an isometry invariant that decides
    the otherwise blind first move), then to the earliest in enumeration
    order.  Enumeration order is the index order, or a seeded shuffle of it
    when ``seed`` is given.
    Stops after ``steps`` moves or when no move is possible.
    """
    if steps is not None and steps < 0:
        raise ValueError("steps must be nonnegative")
    start = PartialIsometry() if start is None else PartialIsometry.build(X, Y, start.pairs)
    if start.max_defect > tol:
        raise PreconditionError(f"start defect {start.max_defect} exceeds tol")
    if seed is None:
        ox, oy = list(range(X.n)), list(range(Y.n))
    else:
        rng = np.random.default_rng(seed)
        ox, oy = [int(i) for i in rng.permutation(X.n)], [int(j) for j in rng.permutation(Y.n)]
    pos = {0: {p: r for r, p in enumerate(ox)}, 1: {p: r for r, p in enumerate(oy)}}
    xs = [a for a, _ in start.pairs]
    ys = [b for _, b in start.pairs]
    defect = start.max_defect
    done = 0
    turn = 0
    stalled = 0
    limit = steps if steps is not None else X.n + Y.n
    while done < limit and stalled < 2:
        src_d, dst_d, order, src_used, dst_used = (
            (X.d, Y.d, ox, xs, ys) if turn == 0 else (Y.d, X.d, oy, ys, xs))
        free_src = [p for p in order if p not in src_used]
        free_dst = [q for q in (oy if turn == 0 else ox) if q not in dst_used]
        if not free_src or not free_dst:
            stalled += 1
            turn ^= 1
            continue
        stalled = 0
        s = free_src[0]
        local = _pair_cost(src_d, dst_d, src_used, dst_used, s)
        profile = _profile_gap(src_d[s], dst_d)
        best = min(free_dst, key=lambda q: (max(defect, local[q]), local[q], profile[q], pos[1 - turn][q]))
        defect = max(defect, float(local[best]))
        src_used.append(s)
        dst_used.append(best)
        done += 1
        turn ^= 1
    return PartialIsometry(tuple(sorted(zip(xs, ys))), defect)
