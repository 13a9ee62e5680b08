"""Random and named finite metric spaces."""

from __future__ import annotations

import numpy as np

from .core import FiniteMetricSpace, from_points


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def shortest_paths(w: np.ndarray) -> np.ndarray:
    """Floyd-Warshall closure of a symmetric weight matrix (``inf`` = no edge)."""
    d = np.array(w, dtype=np.float64)
    np.fill_diagonal(d, 0.0)
    for k in range(d.shape[0]):
        d = np.minimum(d, d[:, k][:, None] + d[k, :][None, :])
    return d


def random_euclidean(n: int, seed=None, dim: int = 2) -> FiniteMetricSpace:
    rng = _rng(seed)
    return from_points(rng.uniform(0.0, 1.0, size=(n, dim)))


def random_graph_metric(n: int, seed=None, density: float = 0.6) -> FiniteMetricSpace:
    """Shortest-path metric of a random connected weighted graph."""
    rng = _rng(seed)
    w = np.full((n, n), np.inf)
    for i in range(1, n):
        j = int(rng.integers(i))
        w[i, j] = w[j, i] = rng.uniform(0.1, 1.0)
    extra = np.triu(rng.random((n, n)) < density, 1)
    vals = rng.uniform(0.1, 1.0, size=(n, n))
    w = np.where(extra, np.minimum(w, vals), w)
    w = np.minimum(w, w.T)
    return FiniteMetricSpace(shortest_paths(w))


def random_metric(n: int, seed=None) -> FiniteMetricSpace:
    """Either a Euclidean cloud or a graph metric, chosen at random."""
    rng = _rng(seed)
    if rng.random() < 0.5:
        return random_euclidean(n, rng, dim=int(rng.integers(1, 4)))
    return random_graph_metric(n, rng)


def random_tree(n_nodes: int, seed=None, low: float = 0.1, high: float = 1.0):
    """Random tree on ``n_nodes`` vertices with positive edge weights.

    Returns ``(distances, degrees)`` over all vertices.
    """
    rng = _rng(seed)
    w = np.full((n_nodes, n_nodes), np.inf)
    deg = np.zeros(n_nodes, dtype=int)
    for i in range(1, n_nodes):
        j = int(rng.integers(i))
        w[i, j] = w[j, i] = rng.uniform(low, high)
        deg[i] += 1
        deg[j] += 1
    return shortest_paths(w), deg


def random_tree_metric(n_points: int, seed=None, n_nodes: int | None = None) -> FiniteMetricSpace:
    """Tree metric on ``n_points`` vertices sampled from a random weighted tree."""
    rng = _rng(seed)
    if n_nodes is None:
        n_nodes = n_points + int(rng.integers(0, n_points + 1))
    n_nodes = max(n_nodes, n_points)
    d, _ = random_tree(n_nodes, rng)
    pick = np.sort(rng.choice(n_nodes, size=n_points, replace=False))
    return FiniteMetricSpace(d[np.ix_(pick, pick)])


def random_leaf_metric(max_leaves: int, seed=None) -> FiniteMetricSpace:
    """Metric on the leaves of a random weighted tree, at most ``max_leaves`` of them."""
    rng = _rng(seed)
    while True:
        d, deg = random_tree(int(rng.integers(3, 2 * max_leaves)), rng)
        leaves = np.flatnonzero(deg <= 1)
        if 2 <= leaves.size <= max_leaves:
            return FiniteMetricSpace(d[np.ix_(leaves, leaves)])


def random_ultrametric(n: int, seed=None) -> FiniteMetricSpace:
    """Ultrametric from random agglomerative merges at increasing heights."""
    rng = _rng(seed)
    clusters = [[i] for i in range(n)]
    d = np.zeros((n, n))
    height = 0.0
    while len(clusters) > 1:
        height += rng.uniform(0.05, 1.0)
        a, b = sorted(rng.choice(len(clusters), size=2, replace=False))
        for i in clusters[a]:
            for j in clusters[b]:
                d[i, j] = d[j, i] = height
        clusters[a] = clusters[a] + clusters[b]
        del clusters[b]
    return FiniteMetricSpace(d)


def equilateral(n: int = 3, side: float = 1.0) -> FiniteMetricSpace:
    d = np.full((n, n), float(side))
    np.fill_diagonal(d, 0.0)
    return FiniteMetricSpace(d)


def path(n: int, step: float = 1.0) -> FiniteMetricSpace:
    """Evenly spaced collinear points."""
    x = np.arange(n, dtype=np.float64) * step
    return FiniteMetricSpace(np.abs(x[:, None] - x[None, :]))


def unit_square() -> FiniteMetricSpace:
    """Vertices of the unit square in the plane, in cyclic order."""
    return from_points([(0, 0), (1, 0), (1, 1), (0, 1)])


def star(n_leaves: int, edge: float = 1.0, with_center: bool = True) -> FiniteMetricSpace:
    """Star tree; point 0 is the center when ``with_center``."""
    d = np.full((n_leaves, n_leaves), 2.0 * edge)
    np.fill_diagonal(d, 0.0)
    if not with_center:
        return FiniteMetricSpace(d)
    full = np.zeros((n_leaves + 1, n_leaves + 1))
    full[1:, 1:] = d
    full[0, 1:] = full[1:, 0] = edge
    return FiniteMetricSpace(full)


def rhombus_space() -> FiniteMetricSpace:
    """Four points p, q, x, y: opposite pairs at distance 2, all others at 1."""
    d = np.array([[0, 2, 1, 1],
                  [2, 0, 1, 1],
                  [1, 1, 0, 2],
                  [1, 1, 2, 0]], dtype=np.float64)
    return FiniteMetricSpace(d, ("p", "q", "x", "y"))
