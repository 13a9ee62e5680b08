"""Command-line front end.

Every verb reads its inputs (``-`` means stdin), runs one library
operation and prints a report.  Randomized verbs take ``--seed``, default 0.

Exit codes: 0 success, 1 the input is not a valid metric (or a check the
verb performs fails), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import gh as ghm
from . import hausdorff as hd
from . import injective as inj
from . import io
from . import nets, trees, urysohn
from .core import DEFAULT_TOL, FiniteMetricSpace, ValidationError, metric_components, quotient_pseudometric, require_valid, validate

SIG_DIGITS = 12
EXACT_CHECK = 1e-9


class UsageError(Exception):
    pass


class Exact:
    """Report payload emitted verbatim (no rounding), e.g. matrices meant to be re-read."""

    def __init__(self, data):
        self.data = data


class DomainFailure(Exception):
    """The verb ran but its input violates a requirement; carries the report."""

    def __init__(self, report):
        super().__init__("domain violation")
        self.report = report


# -- serialization ------------------------------------------------------------------


def _clean(x):
    if isinstance(x, Exact):
        return x.data
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        v = float(f"{v:.{SIG_DIGITS}g}")
        return v + 0.0
    return x


def emit_report(result: dict, fmt: str = "json") -> str:
    """Deterministic rendering: sorted keys, floats at 12 significant digits."""
    data = _clean(result)
    if fmt == "json":
        return json.dumps(data, sort_keys=True) + "\n"
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        else:
            lines.append(f"{prefix}: {json.dumps(v)}")

    walk("", data)
    return "\n".join(lines) + "\n"


# -- helpers ---------------------------------------------------------------------------


def _space(path, tol=DEFAULT_TOL) -> FiniteMetricSpace:
    space = io.read_matrix(path)
    try:
        return require_valid(space, tol)
    except ValidationError as exc:
        raise DomainFailure(_validation_dict(exc.report)) from None


def _finite_space(path, tol=DEFAULT_TOL) -> FiniteMetricSpace:
    space = _space(path, tol)
    if not space.is_finite():
        raise DomainFailure({"ok": False, "error": "infinite distances; split with 'components' first"})
    return space


def _indices(text: str | None, name: str):
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--{name} must be comma separated indices") from None


def _violation(v):
    if v is None:
        return None
    return {"axiom": v.axiom, "witness": list(v.witness), "defect": v.defect, "count": v.count}


def _validation_dict(report) -> dict:
    return {
        "ok": report.ok,
        "violations": [_violation(v) for v in report.violations],
        "quadrilateral_checked": report.quadrilateral_checked,
        "quadrilateral": _violation(report.quadrilateral),
    }


def _need(value, name):
    if value is None:
        raise UsageError(f"--{name} is required")
    return value


def _state(path, args) -> urysohn.GrowthState:
    """A saved growth state, or a plain matrix wrapped as one (uncapped unless ``--cap``)."""
    text = io.read_text(path)
    if io.sniff(text) == "json":
        data = json.loads(text)
        if isinstance(data, dict) and isinstance(data.get("state"), dict):
            data = data["state"]
        if isinstance(data, dict) and "d_cap" in data:
            state = urysohn.GrowthState.from_json(data)
            require_valid(state.space, EXACT_CHECK)
            return state
        space = io.parse_matrix_json(text)
    else:
        space = io.parse_matrix_text(text)
    try:
        space = require_valid(space, args.tol)
    except ValidationError as exc:
        raise DomainFailure(_validation_dict(exc.report)) from None
    cap = args.cap if args.cap is not None else float("inf")
    return urysohn.GrowthState(space, cap, [], np.random.default_rng(args.seed))


# -- verbs -------------------------------------------------------------------------------


def cmd_validate(args):
    space = io.read_matrix(args.inputs[0])
    report = validate(space, args.tol, require_separation=args.strict)
    out = _validation_dict(report)
    if not report.ok:
        raise DomainFailure(out)
    return out


def cmd_quotient(args):
    space = _space(args.inputs[0], args.tol)
    q, classes = quotient_pseudometric(space, args.tol)
    return {"space": Exact(io.matrix_json(q)), "classes": classes}


def cmd_components(args):
    space = _space(args.inputs[0], args.tol)
    comps = metric_components(space)
    return {"count": len(comps),
            "components": [{"indices": idx, "space": Exact(io.matrix_json(sub))} for sub, idx in comps]}


def cmd_net(args):
    space = _space(args.inputs[0], args.tol)
    eps = _need(args.eps, "eps")
    cert = nets.greedy_packing(space, eps, args.seed)
    check = nets.is_eps_net(space, cert.points, eps)
    return {"eps": eps, "points": list(cert.points.indices), "count": cert.count,
            "kind": cert.kind, "is_net": check.ok, "radius": check.radius}


def cmd_pack(args):
    space = _space(args.inputs[0], args.tol)
    eps = _need(args.eps, "eps")
    if space.n <= args.exact_limit:
        cert = nets.max_packing(space, eps)
    else:
        cert = nets.greedy_packing(space, eps, args.seed)
    return {"eps": eps, "count": cert.count, "kind": cert.kind, "points": list(cert.points.indices)}


def cmd_tree(args):
    space = _finite_space(args.inputs[0], args.tol)
    res = trees.four_point_defect(space)
    return {"defect": res.value, "witness": list(res.witness), "tree_metric": res.holds(args.tol)}


def cmd_ultra(args):
    space = _finite_space(args.inputs[0], args.tol)
    res = trees.ultrametric_defect(space)
    return {"defect": res.value, "witness": list(res.witness), "ultrametric": res.holds(args.tol)}


def cmd_hausdorff(args):
    space = _space(args.inputs[0], args.tol)
    A = _indices(args.a, "a")
    B = _indices(args.b, "b")
    return {
        "value": hd.hausdorff_distance(space, A, B),
        "directed_ab": hd.directed_hausdorff(space, A, B),
        "directed_ba": hd.directed_hausdorff(space, B, A),
    }


def cmd_planar_hausdorff(args):
    if len(args.inputs) != 2:
        raise UsageError("planar-hausdorff needs two cloud files")
    A = io.read_cloud(args.inputs[0])
    B = io.read_cloud(args.inputs[1])
    return {"points": hd.planar_hausdorff(A, B), "hulls": hd.planar_hausdorff(A, B, as_hulls=True)}


def _pair(args):
    if len(args.inputs) != 2:
        raise UsageError(f"{args.verb} needs two matrix files")
    return _finite_space(args.inputs[0], args.tol), _finite_space(args.inputs[1], args.tol)


def cmd_gh(args):
    X, Y = _pair(args)
    res = ghm.gh_exact(X, Y, args.budget)
    return {"value": res.value, "exact": res.exact, "nodes_explored": res.nodes_explored,
            "correspondence": [list(p) for p in res.optimal.pairs]}


def cmd_gh_bounds(args):
    X, Y = _pair(args)
    return {
        "lower": ghm.gh_lower_bound(X, Y),
        "diameter_bound": ghm.diameter_bound(X, Y),
        "eccentricity_bound": ghm.eccentricity_bound(X, Y),
        "sorted_distance_heuristic": ghm.sorted_distance_heuristic(X, Y),
        "prime": ghm.gh_prime(X, Y, args.budget).value,
    }


def cmd_glue(args):
    X, Y = _pair(args)
    res = ghm.gh_exact(X, Y, args.budget)
    Z, xi, yi = ghm.glue_along(X, Y, res.optimal)
    return {"space": Exact(io.matrix_json(Z)), "x_indices": xi, "y_indices": yi,
            "gh": res.value, "exact": res.exact,
            "hausdorff": hd.hausdorff_distance(Z, xi, yi),
            "correspondence": [list(p) for p in res.optimal.pairs]}


def cmd_tightspan(args):
    space = _finite_space(args.inputs[0], args.tol)
    count = args.trials if args.trials is not None else 2 * space.n + 8
    samples = inj.sample_tight_span(space, count, args.seed, args.tol)
    out = {"samples": [f.tolist() for f in samples]}
    if space.n <= 6:
        out["vertices"] = [f.tolist() for f in inj.tight_span_vertices(space, args.tol)]
    return out


def cmd_hyperconvex(args):
    space = _finite_space(args.inputs[0], args.tol)
    w = inj.hyperconvexity_witness(space, args.tol, seed=args.seed)
    return {"hyperconvex": w is None, "witness": None if w is None else w.tolist()}


def cmd_urysohn_grow(args):
    steps = _need(args.steps, "steps")
    if args.inputs:
        state = _state(args.inputs[0], args)
    else:
        cap = args.cap if args.cap is not None else float("inf")
        state = urysohn.new_state(cap, args.seed)
    state = urysohn.random_grow(state, steps)
    return {"state": Exact(state.to_json())}


def cmd_urysohn_stats(args):
    state = _state(args.inputs[0], args)
    trials = args.trials if args.trials is not None else 200
    tol = args.eps if args.eps is not None else 0.05
    st = urysohn.extension_property_stats(state, trials, tol, args.seed, d_cap=args.cap)
    return {"n": state.n, "tol": tol, "trials": trials,
            "success_rate": st.success_rate, "worst_defect": st.worst_defect}


def cmd_back_and_forth(args):
    X, Y = _pair(args)
    res = urysohn.back_and_forth(X, Y, steps=args.steps, seed=args.seed if args.shuffle else None, tol=args.tol)
    return {"pairs": [list(p) for p in res.pairs], "max_defect": res.max_defect}


VERBS = {
    "validate": (cmd_validate, "check the metric axioms (exit 1 on violation)"),
    "quotient": (cmd_quotient, "identify points at distance <= tol"),
    "components": (cmd_components, "split an infinity-metric into finite components"),
    "net": (cmd_net, "greedy eps-net (maximal eps-packing)"),
    "pack": (cmd_pack, "packing number, exact for small spaces"),
    "tree": (cmd_tree, "four-point (tree metric) defect"),
    "ultra": (cmd_ultra, "ultrametric defect"),
    "hausdorff": (cmd_hausdorff, "Hausdorff distance between index sets --a and --b"),
    "planar-hausdorff": (cmd_planar_hausdorff, "Hausdorff distance of two planar clouds and of their hulls"),
    "gh": (cmd_gh, "exact Gromov-Hausdorff distance with an optimal correspondence"),
    "gh-bounds": (cmd_gh_bounds, "cheap GH bounds and the GH' variant"),
    "glue": (cmd_glue, "metric on the disjoint union realizing an optimal correspondence"),
    "tightspan": (cmd_tightspan, "extremal functions: samples (--trials of them) and vertices"),
    "hyperconvex": (cmd_hyperconvex, "search for an extremal function no point realizes"),
    "urysohn-grow": (cmd_urysohn_grow, "grow a random Urysohn approximation (optional state file to continue)"),
    "urysohn-stats": (cmd_urysohn_stats, "approximate extension property; --eps sets the tolerance"),
    "back-and-forth": (cmd_back_and_forth, "greedy back-and-forth partial isometry"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finmetric", description="Metric geometry on finite metric spaces.")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")
    for name, (_, help_text) in VERBS.items():
        s = sub.add_parser(name, help=help_text, description=help_text)
        s.add_argument("inputs", nargs="*", metavar="FILE", help="matrix text/JSON or planar CSV; '-' for stdin")
        s.add_argument("--tol", type=float, default=DEFAULT_TOL)
        s.add_argument("--eps", type=float)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--budget", type=int, default=ghm.DEFAULT_BUDGET)
        s.add_argument("--format", choices=("json", "text"), default="json")
        s.add_argument("--cap", type=float)
        s.add_argument("--trials", type=int)
        s.add_argument("--steps", type=int)
        if name == "validate":
            s.add_argument("--strict", action="store_true", help="also require separation")
        if name == "pack":
            s.add_argument("--exact-limit", type=int, default=20)
        if name == "hausdorff":
            s.add_argument("--a", help="comma separated indices")
            s.add_argument("--b", help="comma separated indices")
        if name == "back-and-forth":
            s.add_argument("--shuffle", action="store_true", help="seeded enumeration order")
    return p


_NEEDS_INPUT = set(VERBS) - {"urysohn-grow"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = VERBS[args.verb][0]
    try:
        if args.verb in _NEEDS_INPUT and not args.inputs:
            raise UsageError(f"{args.verb} needs an input file")
        if args.tol < 0:
            raise UsageError("--tol must be nonnegative")
        out = func(args)
        code = 0
    except DomainFailure as exc:
        out, code = exc.report, 1
    except (UsageError, io.ParseError, OSError, json.JSONDecodeError) as exc:
        print(f"finmetric {args.verb}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, inj.PreconditionError) as exc:
        print(f"finmetric {args.verb}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(out, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
