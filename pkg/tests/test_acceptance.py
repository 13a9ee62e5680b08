"""Acceptance suite: twelve criteria at their stated tolerances.

Each test records one line per criterion (or per part of a criterion) in
``conftest.ACCEPTANCE``; pytest prints them in the terminal summary.  Run
the file directly to get the same lines without pytest:

    python tests/test_acceptance.py
"""

import subprocess
import sys
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import conftest  # noqa: E402
from finmetric import (  # noqa: E402
    FiniteMetricSpace, diameter, distance_function, extremal_below, four_point_defect, gh_exact, glue_along,
    greedy_packing, hausdorff_distance, inj_distance, is_eps_net, is_extremal, packing_number, permute, restrict,
    sample_tight_span, scale, ultrametric_defect, validate,
)
from finmetric import urysohn as U  # noqa: E402
from finmetric.generators import equilateral, random_leaf_metric, random_metric, rhombus_space, unit_square  # noqa: E402
from finmetric.hausdorff import neighborhood_radius, planar_hausdorff  # noqa: E402
from finmetric.injective import random_admissible  # noqa: E402
from finmetric.trees import spheres  # noqa: E402
from oracles import all_isometries, max_packing_bruteforce  # noqa: E402

POINT = FiniteMetricSpace([[0.0]])
DATA = Path(__file__).parent / "data"


def record(criterion, label, ok, detail):
    conftest.ACCEPTANCE.setdefault(criterion, []).append((label, bool(ok), detail))
    print(f"criterion {criterion:>2} {'PASS' if ok else 'FAIL'}  {label}: {detail}")
    return ok


def check(criterion, label, ok, detail):
    assert record(criterion, label, ok, detail), f"criterion {criterion} ({label}) failed: {detail}"


# 1 ------------------------------------------------------------------------------------


def test_c01_gh_to_point():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        X = random_metric(int(rng.integers(1, 8)), rng)
        worst = max(worst, abs(gh_exact(X, POINT).value - 0.5 * diameter(X)))
    check(1, "gh(X, point) = diam/2 on 200 spaces", worst <= 1e-9, f"max error {worst:.3g}")


# 2 ------------------------------------------------------------------------------------


def test_c02_gh_scaling():
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(50):
        X = random_metric(int(rng.integers(1, 6)), rng)
        a, b = np.sort(rng.uniform(0, 3, size=2))
        a = max(a, 1e-3)
        err = abs(gh_exact(scale(X, a), scale(X, b)).value - 0.5 * (b - a) * diameter(X))
        worst = max(worst, err)
    check(2, "gh(aX, bX) = (b-a) diam/2 on 50 spaces", worst <= 1e-9, f"max error {worst:.3g}")


# 3 ------------------------------------------------------------------------------------


def test_c03_gh_axioms():
    rng = np.random.default_rng(103)
    asym = 0.0
    tri = -np.inf
    for _ in range(100):
        X, Y, Z = (random_metric(int(rng.integers(1, 5)), rng) for _ in range(3))
        xy, yx = gh_exact(X, Y).value, gh_exact(Y, X).value
        asym = max(asym, abs(xy - yx))
        tri = max(tri, gh_exact(X, Z).value - xy - gh_exact(Y, Z).value)
    perm_worst = 0.0
    separated = 0
    tried = 0
    for _ in range(100):
        X = random_metric(int(rng.integers(2, 5)), rng)
        perm_worst = max(perm_worst, gh_exact(X, permute(X, list(rng.permutation(X.n)))).value)
        d = X.d.copy()
        d[0, 1] = d[1, 0] = d[0, 1] * 1.05
        Y = FiniteMetricSpace(d)
        if validate(Y).ok and not all_isometries(X.d, Y.d):
            tried += 1
            separated += gh_exact(X, Y).value > 0
    ok = asym == 0 and tri <= 1e-9 and perm_worst < 1e-9 and separated == tried > 0
    check(3, "GH symmetry, triangle, separation", ok,
          f"asymmetry {asym:.3g}, worst triangle excess {tri:.3g}, permuted max {perm_worst:.3g}, "
          f"perturbed positive {separated}/{tried}")


# 4 ------------------------------------------------------------------------------------


def test_c04_gluing_certificate():
    rng = np.random.default_rng(104)
    worst = 0.0
    invalid = 0
    for _ in range(100):
        X = random_metric(int(rng.integers(1, 6)), rng)
        Y = random_metric(int(rng.integers(1, 6)), rng)
        res = gh_exact(X, Y)
        Z, xi, yi = glue_along(X, Y, res.optimal)
        invalid += not validate(Z, 1e-12).ok
        worst = max(worst, abs(hausdorff_distance(Z, xi, yi) - res.value))
    check(4, "glued space valid, copies at Hausdorff distance gh", invalid == 0 and worst <= 1e-9,
          f"invalid {invalid}/100, max |Hd - gh| {worst:.3g}")


# 5 ------------------------------------------------------------------------------------


def _tripod_params(values, centre):
    """Leg and x when values are one ``centre - x`` and two ``centre + x``; None when not of that form."""
    v = np.asarray(values)
    leg = int(np.argmin(v))
    x = centre - v[leg]
    expect = np.full(3, centre + x)
    expect[leg] = centre - x
    if np.abs(v - expect).max() > 1e-9 or not -1e-9 <= x <= 0.5 + 1e-9:
        return None
    return leg, max(x, 0.0)


def _tripod_distances_match(samples, params):
    vals = np.array([f.values for f in samples])
    legs = np.array([p[0] for p in params])
    xs = np.array([p[1] for p in params])
    got = np.abs(vals[:, None, :] - vals[None, :, :]).max(axis=-1)
    same = (legs[:, None] == legs[None, :]) | (xs[:, None] <= 1e-12) | (xs[None, :] <= 1e-12)
    want = np.where(same, np.abs(xs[:, None] - xs[None, :]), xs[:, None] + xs[None, :])
    return float(np.abs(got - want).max())


@pytest.fixture(scope="module")
def triangle_samples():
    T = equilateral()
    samples = sample_tight_span(T, 500, seed=5)
    assert len(samples) == 500 and all(is_extremal(T, f) for f in samples)
    return samples


def test_c05_tripod_as_stated(triangle_samples):
    """Stated form: one value 1 - x and two values 1 + x, x in [0, 1/2]."""
    params = [_tripod_params(f.values, 1.0) for f in triangle_samples]
    matched = sum(p is not None for p in params)
    detail = f"{matched}/500 samples of the form (1-x, 1+x, 1+x)"
    if matched == 500:
        gap = _tripod_distances_match(triangle_samples, params)
        detail += f", max distance error {gap:.3g}"
        matched = matched if gap <= 1e-9 else -1
    check(5, "tripod parametrization with centre 1", matched == 500, detail)


def test_c05_tripod_half_offsets(triangle_samples):
    """Form the samples actually take: one value 1/2 - x and two values 1/2 + x."""
    params = [_tripod_params(f.values, 0.5) for f in triangle_samples]
    matched = sum(p is not None for p in params)
    gap = _tripod_distances_match(triangle_samples, params) if matched == 500 else np.inf
    legs = {p[0] for p in params if p is not None and p[1] > 1e-9}
    check(5, "tripod parametrization with centre 1/2", matched == 500 and gap <= 1e-9 and legs == {0, 1, 2},
          f"{matched}/500 matched, legs hit {sorted(legs)}, max distance error {gap:.3g}")


# 6 ------------------------------------------------------------------------------------


def test_c06_rhombus():
    R = rhombus_space()  # p, q, x, y
    samples = sample_tight_span(R, 500, seed=6)
    v = np.array([f.values for f in samples])
    sums = max(np.abs(v[:, 2] + v[:, 3] - 2).max(), np.abs(v[:, 0] + v[:, 1] - 2).max())
    a, b = v[:, 2] - 1, v[:, 0] - 1
    l1 = float((np.abs(a) + np.abs(b)).max())
    got = np.abs(v[:, None, :] - v[None, :, :]).max(axis=-1)
    want = np.maximum(np.abs(a[:, None] - a[None, :]), np.abs(b[:, None] - b[None, :]))
    gap = float(np.abs(got - want).max())
    check(6, "rhombus tight span", sums <= 1e-9 and l1 <= 1 + 1e-9 and gap <= 1e-9,
          f"{len(samples)} samples, sum error {sums:.3g}, max |a|+|b| {l1:.6f}, distance error {gap:.3g}")


# 7 ------------------------------------------------------------------------------------


def test_c07_extremal_calculus():
    rng = np.random.default_rng(107)
    not_extremal = 0
    lip = -np.inf
    ident = 0.0
    for _ in range(200):
        X = random_metric(int(rng.integers(1, 9)), rng)
        g = extremal_below(X, random_admissible(X, rng))
        not_extremal += not is_extremal(X, g)
        lip = max(lip, float((np.abs(g.values[:, None] - g.values[None, :]) - X.d).max()))
        for p in range(X.n):
            ident = max(ident, abs(inj_distance(g, distance_function(X, p)) - g[p]))
    key_fail = 0
    for _ in range(1000):
        X = random_metric(int(rng.integers(1, 7)), rng)
        r = extremal_below(X, random_admissible(X, rng)).values
        s = random_admissible(X, rng).values
        c = float((s - r).max())  # smallest c with r >= s - c, up to rounding
        while not (r >= s - c).all():
            c = float(np.nextafter(c, np.inf))
        key_fail += not (c >= 0 and (r <= s + c + 1e-12).all())
    ok = not_extremal == 0 and lip <= 0 and ident <= 1e-9 and key_fail == 0
    check(7, "extremal calculus", ok,
          f"non-extremal {not_extremal}/200, max Lipschitz excess {lip:.3g}, "
          f"|f - dist_p| identity error {ident:.3g}, key implication failures {key_fail}/1000")


# 8 ------------------------------------------------------------------------------------


def test_c08_hausdorff():
    rng = np.random.default_rng(108)
    mismatches = 0
    pairs = 0
    for _ in range(12):
        X = random_metric(int(rng.integers(1, 7)), rng)
        subs = [s for r in range(1, X.n + 1) for s in combinations(range(X.n), r)]
        for A in subs:
            for B in subs:
                pairs += 1
                mismatches += hausdorff_distance(X, A, B) != neighborhood_radius(X, A, B)
    diam_fail = 0
    for _ in range(1000):
        X = random_metric(int(rng.integers(1, 9)), rng)
        A = sorted(set(rng.integers(0, X.n, size=int(rng.integers(1, X.n + 1))).tolist()))
        B = sorted(set(rng.integers(0, X.n, size=int(rng.integers(1, X.n + 1))).tolist()))
        gap = abs(diameter(restrict(X, A)) - diameter(restrict(X, B)))
        diam_fail += gap > 2 * hausdorff_distance(X, A, B)
    hull_worst = -np.inf
    for _ in range(200):
        A = rng.normal(size=(int(rng.integers(1, 12)), 2))
        B = rng.normal(size=(int(rng.integers(1, 12)), 2)) * rng.uniform(0.5, 2) + rng.normal(size=2)
        hull_worst = max(hull_worst, planar_hausdorff(A, B, as_hulls=True) - planar_hausdorff(A, B))
    ok = mismatches == 0 and diam_fail == 0 and hull_worst <= 1e-6
    check(8, "Hausdorff suite", ok,
          f"min-radius mismatches {mismatches}/{pairs}, diam 2-Lipschitz failures {diam_fail}/1000, "
          f"max hull excess {hull_worst:.3g}")


# 9 ------------------------------------------------------------------------------------


def test_c09_trees():
    rng = np.random.default_rng(109)
    worst4 = 0.0
    worst_sphere = 0.0
    for _ in range(100):
        T = random_leaf_metric(12, rng)
        worst4 = max(worst4, four_point_defect(T).value)
        for _, _, sel in spheres(T):
            if len(sel):
                worst_sphere = max(worst_sphere, ultrametric_defect(restrict(T, sel)).value)
    square = four_point_defect(unit_square()).value
    ok = worst4 < 1e-9 and square > 0.1 and worst_sphere < 1e-9
    check(9, "tree metrics", ok,
          f"max four-point defect {worst4:.3g}, unit square {square:.4f}, max sphere ultrametric defect {worst_sphere:.3g}")


# 10 -----------------------------------------------------------------------------------


def test_c10_packing():
    rng = np.random.default_rng(110)
    not_net = 0
    for _ in range(500):
        X = random_metric(int(rng.integers(1, 16)), rng)
        eps = float(rng.uniform(0.01, 1.2 * max(diameter(X), 0.1)))
        cert = greedy_packing(X, eps, seed=int(rng.integers(1 << 30)))
        not_net += not is_eps_net(X, cert.points, eps)
    wrong = 0
    for _ in range(200):
        X = random_metric(int(rng.integers(1, 11)), rng)
        eps = float(rng.uniform(0.01, max(diameter(X), 0.1)))
        wrong += packing_number(X, eps)[0] != max_packing_bruteforce(X.d, eps)
    check(10, "packings and nets", not_net == 0 and wrong == 0,
          f"greedy not a net {not_net}/500, exact packing mismatches {wrong}/200")


# 11 -----------------------------------------------------------------------------------


def _new_point_triangles(d):
    """Worst triangle excess among triangles through the last point (independent check)."""
    p = d.shape[0] - 1
    row = d[p]
    a = row[:, None] - (row[None, :] + d)          # d(p,x) vs d(p,y) + d(y,x)
    b = d - (row[:, None] + row[None, :])          # d(x,y) vs d(x,p) + d(p,y)
    return float(max(a.max(), b.max()))


@pytest.fixture(scope="module")
def grown():
    states = []
    U.random_grow(U.new_state(1.0, seed=0), 500, callback=states.append)
    return states


def test_c11_growth_valid(grown):
    worst_tri = -np.inf
    worst_diam = 0.0
    worst_real = 0.0
    full_checks = 0
    for k, st in enumerate(grown, start=1):
        d = st.space.d
        worst_tri = max(worst_tri, _new_point_triangles(d))
        worst_diam = max(worst_diam, float(d.max()))
        h = st.history[-1]
        worst_real = max(worst_real, float(np.abs(d[-1, list(h.subset)] - h.values).max()))
        if k % 25 == 0:
            full_checks += 1
            assert validate(st.space, 1e-12, quadrilateral_limit=0).ok
    ok = len(grown) == 500 and worst_tri <= 1e-12 and worst_diam <= 1 + 1e-12 and worst_real <= 1e-12
    check(11, "500-step cap-1 growth valid, capped, exact", ok,
          f"max new-triangle excess {worst_tri:.3g}, max distance {worst_diam:.12g}, "
          f"max realization error {worst_real:.3g}, {full_checks} full validations")


def test_c11_extension_rate(grown):
    stats = U.extension_property_stats(grown[-1], 400, 0.05, seed=0)
    check(11, "extension success rate >= 0.9 at tol 0.05 (calibration target)", stats.success_rate >= 0.9,
          f"rate {stats.success_rate:.4f} over 400 trials, worst defect {stats.worst_defect:.3f}")


def test_c11_back_and_forth():
    X = random_metric(5, 111)
    Y = permute(X, [3, 0, 4, 1, 2])
    defects = [U.back_and_forth(X, Y, seed=s).max_defect for s in range(20)]
    hits = sum(v < 1e-9 for v in defects)
    check(11, "back-and-forth reaches an isometry", hits >= 1, f"{hits}/20 seeds with defect < 1e-9")


# 12 -----------------------------------------------------------------------------------


def test_c12_cli_determinism():
    from test_cli import INVOCATIONS, resolve

    differing = []
    for verb, args in sorted(INVOCATIONS.items()):
        runs = [subprocess.run([sys.executable, "-m", "finmetric", *resolve(args)], capture_output=True)
                for _ in range(2)]
        if runs[0].returncode != 0 or runs[0].stdout != runs[1].stdout or not runs[0].stdout:
            differing.append(verb)
    check(12, "CLI reports byte-identical across runs", not differing,
          f"{len(INVOCATIONS) - len(differing)}/{len(INVOCATIONS)} verbs identical"
          + (f", differing: {differing}" if differing else ""))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
