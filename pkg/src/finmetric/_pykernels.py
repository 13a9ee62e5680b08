"""Pure-Python kernels, used when the compiled module is unavailable.

Every function here has a twin in ``_ckernels.pyx`` with the same
signature, the same scan order and the same floating-point expression
order, so both backends return identical values, witnesses and node counts.
"""

import numpy as np

NEG_INF = float("-inf")


def triangle_scan(d, tol):
    """Scan ordered triples of distinct indices for ``d[i,k] > d[i,j] + d[j,k] + tol``.

    Returns ``(count, worst, (i, k, j))``; the witness is the
    lexicographically smallest maximizer, ``()`` when nothing is violated.
    """
    n = d.shape[0]
    count = 0
    worst = NEG_INF
    witness = ()
    idx = np.arange(n)
    for i in range(n):
        rhs = d[i, :][None, :] + d.T
        with np.errstate(invalid="ignore"):
            defect = d[i, :][:, None] - rhs
        defect[np.isinf(rhs)] = NEG_INF
        defect[i, :] = NEG_INF
        defect[:, i] = NEG_INF
        defect[idx, idx] = NEG_INF
        viol = defect > tol
        c = int(viol.sum())
        if c == 0:
            continue
        count += c
        flat = int(np.argmax(defect))
        val = float(defect.flat[flat])
        if val > worst:
            worst = val
            k, j = divmod(flat, n)
            witness = (i, k, j)
    if count == 0:
        return 0, 0.0, ()
    return count, worst, witness


def quad_scan(d, tol):
    """Scan ordered 4-tuples for ``d[p,q] + d[x,y] > d[p,x] + d[p,y] + d[q,x] + d[q,y] + tol``."""
    n = d.shape[0]
    count = 0
    worst = NEG_INF
    witness = ()
    for p in range(n):
        # axes: (q, x, y)
        lhs = d[p, :][:, None, None] + d[None, :, :]
        rhs = d[p, :][None, :, None] + d[p, :][None, None, :] + d[:, :, None] + d[:, None, :]
        with np.errstate(invalid="ignore"):
            defect = lhs - rhs
        defect[np.isinf(rhs)] = NEG_INF
        viol = defect > tol
        c = int(viol.sum())
        if c == 0:
            continue
        count += c
        flat = int(np.argmax(defect))
        val = float(defect.flat[flat])
        if val > worst:
            worst = val
            q, rem = divmod(flat, n * n)
            x, y = divmod(rem, n)
            witness = (p, q, x, y)
    if count == 0:
        return 0, 0.0, ()
    return count, worst, witness


def four_point_scan(d):
    """Largest gap between the two biggest matching sums over 4-subsets."""
    n = d.shape[0]
    best = 0.0
    witness = ()
    if n < 4:
        return best, witness
    kk, ll = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    for i in range(n):
        for j in range(i + 1, n):
            s1 = d[i, j] + d
            s2 = d[i, :][:, None] + d[j, :][None, :]
            s3 = d[j, :][:, None] + d[i, :][None, :]
            # s1[k,l] = d[i,j]+d[k,l]; s2[k,l] = d[i,k]+d[j,l]; s3[k,l] = d[i,l]+d[j,k]
            hi = np.maximum(np.maximum(s1, s2), s3)
            mid = np.maximum(np.minimum(s1, s2), np.minimum(np.maximum(s1, s2), s3))
            gap = hi - mid
            gap[~((kk > j) & (ll > kk))] = NEG_INF
            flat = int(np.argmax(gap))
            val = float(gap.flat[flat])
            if val > best:
                best = val
                k, l = divmod(flat, n)
                witness = (i, j, k, l)
    return best, witness


def ultra_scan(d):
    """Largest ``d[x,z] - max(d[x,y], d[y,z])`` over ordered triples."""
    n = d.shape[0]
    best = 0.0
    witness = ()
    for x in range(n):
        # axes: (y, z)
        gap = d[x, :][None, :] - np.maximum(d[x, :][:, None], d)
        flat = int(np.argmax(gap))
        val = float(gap.flat[flat])
        if val > best:
            best = val
            y, z = divmod(flat, n)
            witness = (x, y, z)
    return best, witness


def correspondence_bb(dx, dy, slots, symmetric, budget, upper, target):
    """Branch and bound over partner assignments.

    ``slots`` is a sequence of ``(side, point)`` with side 0 for a point of
    X (choose a partner in Y) and 1 for a point of Y (choose a partner in
    X).  With ``symmetric`` the pair cost is ``|dx - dy|``, otherwise it is
    the signed expansion defect ``dx - dy``.  The state matrix ``M[x, y]``
    holds the cost of adding pair ``(x, y)`` to the pairs chosen so far.

    Returns ``(best, choice, nodes, complete)`` where ``choice[s]`` is the
    partner chosen for slot ``s`` in the incumbent (``None`` if no leaf was
    reached).  ``complete`` is False iff the node budget stopped the search.
    """
    m, k = dx.shape[0], dy.shape[0]
    nslots = len(slots)
    state = {"best": upper, "choice": None, "nodes": 0, "stop": False, "budget_hit": False}
    current = [-1] * nslots

    def row_of(slot, M):
        side, p = slot
        return M[p, :] if side == 0 else M[:, p]

    def dfs(depth, M, D):
        if depth == nslots:
            if D < state["best"]:
                state["best"] = D
                state["choice"] = list(current)
                if D <= target:
                    state["stop"] = True
            return
        lb = D
        for s in range(depth, nslots):
            r = float(row_of(slots[s], M).min())
            if r > lb:
                lb = r
        if lb >= state["best"]:
            return
        side, p = slots[depth]
        costs = row_of(slots[depth], M)
        order = np.argsort(costs, kind="stable")
        for o in order:
            o = int(o)
            c = float(costs[o])
            if c < D:
                c = D
            if c >= state["best"]:
                break
            if state["choice"] is not None and state["nodes"] >= budget:
                state["stop"] = True
                state["budget_hit"] = True
                return
            state["nodes"] += 1
            x, y = (p, o) if side == 0 else (o, p)
            if symmetric:
                step = np.abs(dx[:, x][:, None] - dy[:, y][None, :])
            else:
                step = dx[:, x][:, None] - dy[:, y][None, :]
            current[depth] = o
            dfs(depth + 1, np.maximum(M, step), c)
            current[depth] = -1
            if state["stop"]:
                return

    dfs(0, np.zeros((m, k)), 0.0)
    return state["best"], state["choice"], state["nodes"], not state["budget_hit"]


def mis_bb(adj):
    """Maximum independent set of the graph with boolean adjacency ``adj``.

    Vertices of degree <= 1 are taken greedily; otherwise branch on a
    maximum-degree vertex (include, then exclude).  Ties go to the smallest
    index.  Returns ``(members, nodes)``.
    """
    n = adj.shape[0]
    nbr = [sum(1 << j for j in range(n) if adj[i, j] and j != i) for i in range(n)]
    best = {"size": -1, "set": 0, "nodes": 0}

    def rec(P, cur, size):
        best["nodes"] += 1
        if P == 0:
            if size > best["size"]:
                best["size"] = size
                best["set"] = cur
            return
        if size + P.bit_count() <= best["size"]:
            return
        vmin, dmin, vmax, dmax = -1, n + 1, -1, -1
        rest = P
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            deg = (nbr[v] & P).bit_count()
            if deg < dmin:
                vmin, dmin = v, deg
            if deg > dmax:
                vmax, dmax = v, deg
        if dmin <= 1:
            rec(P & ~(nbr[vmin] | (1 << vmin)), cur | (1 << vmin), size + 1)
            return
        rec(P & ~(nbr[vmax] | (1 << vmax)), cur | (1 << vmax), size + 1)
        rec(P & ~(1 << vmax), cur, size)

    rec((1 << n) - 1, 0, 0)
    members = [i for i in range(n) if best["set"] >> i & 1]
    return members, best["nodes"]
