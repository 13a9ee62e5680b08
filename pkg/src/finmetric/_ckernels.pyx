# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Mirrors ``_pykernels`` exactly; see there for semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, isinf, INFINITY
from libc.stdint cimport uint64_t

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


def triangle_scan(const double[:, ::1] d, double tol):
    cdef Py_ssize_t n = d.shape[0], i, j, k
    cdef long count = 0
    cdef double worst = -INFINITY, rhs, defect
    cdef Py_ssize_t wi = -1, wk = -1, wj = -1
    for i in range(n):
        for k in range(n):
            if k == i:
                continue
            for j in range(n):
                if j == i or j == k:
                    continue
                rhs = d[i, j] + d[j, k]
                if isinf(rhs):
                    continue
                defect = d[i, k] - rhs
                if defect > tol:
                    count += 1
                    if defect > worst:
                        worst = defect
                        wi = i; wk = k; wj = j
    if count == 0:
        return 0, 0.0, ()
    return count, worst, (wi, wk, wj)


def quad_scan(const double[:, ::1] d, double tol):
    cdef Py_ssize_t n = d.shape[0], p, q, x, y
    cdef long count = 0
    cdef double worst = -INFINITY, lhs, rhs, defect
    cdef Py_ssize_t w0 = -1, w1 = -1, w2 = -1, w3 = -1
    for p in range(n):
        for q in range(n):
            for x in range(n):
                for y in range(n):
                    rhs = d[p, x] + d[p, y] + d[q, x] + d[q, y]
                    if isinf(rhs):
                        continue
                    lhs = d[p, q] + d[x, y]
                    defect = lhs - rhs
                    if defect > tol:
                        count += 1
                        if defect > worst:
                            worst = defect
                            w0 = p; w1 = q; w2 = x; w3 = y
    if count == 0:
        return 0, 0.0, ()
    return count, worst, (w0, w1, w2, w3)


cdef inline double _max(double a, double b) nogil:
    return a if a > b else b


cdef inline double _min(double a, double b) nogil:
    return a if a < b else b


def four_point_scan(const double[:, ::1] d):
    cdef Py_ssize_t n = d.shape[0], i, j, k, l
    cdef double best = 0.0, s1, s2, s3, hi, mid, gap
    cdef Py_ssize_t w0 = -1, w1 = -1, w2 = -1, w3 = -1
    if n < 4:
        return best, ()
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(k + 1, n):
                    s1 = d[i, j] + d[k, l]
                    s2 = d[i, k] + d[j, l]
                    s3 = d[j, k] + d[i, l]
                    hi = _max(_max(s1, s2), s3)
                    mid = _max(_min(s1, s2), _min(_max(s1, s2), s3))
                    gap = hi - mid
                    if gap > best:
                        best = gap
                        w0 = i; w1 = j; w2 = k; w3 = l
    if w0 < 0:
        return best, ()
    return best, (w0, w1, w2, w3)


def ultra_scan(const double[:, ::1] d):
    cdef Py_ssize_t n = d.shape[0], x, y, z
    cdef double best = 0.0, gap
    cdef Py_ssize_t w0 = -1, w1 = -1, w2 = -1
    for x in range(n):
        for y in range(n):
            for z in range(n):
                gap = d[x, z] - _max(d[x, y], d[y, z])
                if gap > best:
                    best = gap
                    w0 = x; w1 = y; w2 = z
    if w0 < 0:
        return best, ()
    return best, (w0, w1, w2)


cdef struct BBState:
    double best
    long nodes
    long budget
    double target
    bint have
    bint stop
    bint budget_hit


cdef class _BB:
    cdef const double[:, ::1] dx
    cdef const double[:, ::1] dy
    cdef Py_ssize_t m, k, nslots, width
    cdef long[::1] side
    cdef long[::1] point
    cdef double[:, :, ::1] Ms
    cdef long[:, ::1] order
    cdef long[::1] current
    cdef long[::1] incumbent
    cdef bint symmetric
    cdef BBState st

    def __init__(self, dx, dy, slots, bint symmetric):
        self.dx = np.ascontiguousarray(dx, dtype=np.float64)
        self.dy = np.ascontiguousarray(dy, dtype=np.float64)
        self.m = dx.shape[0]
        self.k = dy.shape[0]
        self.nslots = len(slots)
        self.width = max(self.m, self.k)
        self.side = np.array([s for s, _ in slots], dtype=np.int_) if slots else np.zeros(0, dtype=np.int_)
        self.point = np.array([p for _, p in slots], dtype=np.int_) if slots else np.zeros(0, dtype=np.int_)
        self.Ms = np.zeros((self.nslots + 1, self.m, self.k))
        self.order = np.zeros((self.nslots + 1, self.width), dtype=np.int_)
        self.current = np.full(self.nslots + 1, -1, dtype=np.int_)
        self.incumbent = np.full(self.nslots + 1, -1, dtype=np.int_)
        self.symmetric = symmetric

    cdef inline double cost(self, Py_ssize_t depth, Py_ssize_t s, Py_ssize_t o) nogil:
        if self.side[s] == 0:
            return self.Ms[depth, self.point[s], o]
        return self.Ms[depth, o, self.point[s]]

    cdef void dfs(self, Py_ssize_t depth, double D) nogil:
        cdef Py_ssize_t s, o, a, b, opts, x, y, t, i
        cdef double lb, r, c, v, step
        if depth == self.nslots:
            if D < self.st.best:
                self.st.best = D
                self.st.have = True
                for t in range(self.nslots):
                    self.incumbent[t] = self.current[t]
                if D <= self.st.target:
                    self.st.stop = True
            return
        lb = D
        for s in range(depth, self.nslots):
            opts = self.k if self.side[s] == 0 else self.m
            r = INFINITY
            for o in range(opts):
                v = self.cost(depth, s, o)
                if v < r:
                    r = v
            if r > lb:
                lb = r
        if lb >= self.st.best:
            return
        s = depth
        opts = self.k if self.side[s] == 0 else self.m
        # stable insertion sort of options by cost
        for a in range(opts):
            self.order[depth, a] = a
            b = a
            while b > 0 and self.cost(depth, s, self.order[depth, b - 1]) > self.cost(depth, s, a):
                self.order[depth, b] = self.order[depth, b - 1]
                b -= 1
            self.order[depth, b] = a
        for a in range(opts):
            o = self.order[depth, a]
            c = self.cost(depth, s, o)
            if c < D:
                c = D
            if c >= self.st.best:
                break
            if self.st.have and self.st.nodes >= self.st.budget:
                self.st.stop = True
                self.st.budget_hit = True
                return
            self.st.nodes += 1
            if self.side[s] == 0:
                x = self.point[s]; y = o
            else:
                x = o; y = self.point[s]
            for i in range(self.m):
                for t in range(self.k):
                    step = self.dx[i, x] - self.dy[t, y]
                    if self.symmetric:
                        step = fabs(step)
                    v = self.Ms[depth, i, t]
                    self.Ms[depth + 1, i, t] = v if v > step else step
            self.current[depth] = o
            self.dfs(depth + 1, c)
            self.current[depth] = -1
            if self.st.stop:
                return

    def run(self, long budget, double upper, double target):
        self.st.best = upper
        self.st.nodes = 0
        self.st.budget = budget
        self.st.target = target
        self.st.have = False
        self.st.stop = False
        self.st.budget_hit = False
        self.Ms[0, :, :] = 0.0
        with nogil:
            self.dfs(0, 0.0)
        choice = [int(self.incumbent[t]) for t in range(self.nslots)] if self.st.have else None
        return self.st.best, choice, self.st.nodes, not self.st.budget_hit


def correspondence_bb(dx, dy, slots, symmetric, budget, upper, target):
    bb = _BB(dx, dy, list(slots), bool(symmetric))
    return bb.run(int(budget), float(upper), float(target))


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef struct MisState:
    int best_size
    uint64_t best_set
    long nodes


cdef void _mis_rec(uint64_t* nbr, uint64_t P, uint64_t cur, int size, MisState* st) nogil:
    cdef uint64_t rest, low, one = 1
    cdef int v, deg, vmin = -1, dmin = 1 << 30, vmax = -1, dmax = -1
    st.nodes += 1
    if P == 0:
        if size > st.best_size:
            st.best_size = size
            st.best_set = cur
        return
    if size + _popcount(P) <= st.best_size:
        return
    rest = P
    while rest:
        v = __builtin_ctzll(rest)
        rest &= rest - 1
        deg = _popcount(nbr[v] & P)
        if deg < dmin:
            vmin = v; dmin = deg
        if deg > dmax:
            vmax = v; dmax = deg
    if dmin <= 1:
        _mis_rec(nbr, P & ~(nbr[vmin] | (one << vmin)), cur | (one << vmin), size + 1, st)
        return
    _mis_rec(nbr, P & ~(nbr[vmax] | (one << vmax)), cur | (one << vmax), size + 1, st)
    _mis_rec(nbr, P & ~(one << vmax), cur, size, st)


def mis_bb(adj):
    cdef Py_ssize_t n = adj.shape[0], i, j
    cdef uint64_t nbr[64]
    cdef uint64_t one = 1, full
    cdef MisState st
    if n > 64:
        raise ValueError("exact packing supports at most 64 points")
    a = np.asarray(adj, dtype=bool)
    for i in range(n):
        nbr[i] = 0
        for j in range(n):
            if j != i and a[i, j]:
                nbr[i] |= one << j
    full = (one << n) - 1 if n < 64 else ~(<uint64_t>0)
    st.best_size = -1
    st.best_set = 0
    st.nodes = 0
    with nogil:
        _mis_rec(nbr, full, 0, 0, &st)
    return [i for i in range(n) if (st.best_set >> i) & one], st.nodes
