"""Reading and writing distance matrices and planar clouds.

Three grammars are understood:

* matrix text: first line ``n``, then ``n`` rows of ``n`` whitespace
  separated numbers; ``inf`` stands for infinity.
* matrix JSON: ``{"n": ..., "d": [[...]], "labels": [...]}`` (``labels``
  optional; ``"inf"`` strings and bare ``Infinity`` both mean infinity).
* planar CSV: one ``x,y`` pair per line.

Parsing checks the grammar only.  Whether the numbers form a metric is
left to :func:`finmetric.core.validate`.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .core import FiniteMetricSpace


class ParseError(ValueError):
    """Malformed input; ``line`` and ``column`` are 1-based (0 when unknown)."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


def _number(tok: str, line: int, col: int) -> float:
    low = tok.lower()
    if low in ("inf", "+inf", "infinity"):
        return float("inf")
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", line, col) from None
    if np.isnan(v):
        raise ParseError("NaN entry", line, col)
    return v


def _tokens(line: str):
    """``(column, token)`` for each whitespace separated token."""
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def parse_matrix_text(text: str) -> FiniteMetricSpace:
    lines = text.splitlines()
    rows = [(k + 1, _tokens(s)) for k, s in enumerate(lines)]
    rows = [(k, toks) for k, toks in rows if toks]
    if not rows:
        raise ParseError("empty input", 1, 1)
    k0, head = rows[0]
    if len(head) != 1:
        raise ParseError("first line must hold only the point count", k0, head[1][0])
    try:
        n = int(head[0][1])
    except ValueError:
        raise ParseError(f"point count is not an integer: {head[0][1]!r}", k0, head[0][0]) from None
    if n < 1:
        raise ParseError("point count must be positive", k0, head[0][0])
    body = rows[1:]
    if len(body) != n:
        line = body[n][0] if len(body) > n else len(lines) + 1
        raise ParseError(f"expected {n} rows, found {len(body)}", line, 1)
    d = np.empty((n, n))
    for r, (k, toks) in enumerate(body):
        if len(toks) != n:
            col = toks[n][0] if len(toks) > n else len(lines[k - 1]) + 1
            raise ParseError(f"row {r + 1} has {len(toks)} entries, expected {n}", k, col)
        for c, (col, tok) in enumerate(toks):
            d[r, c] = _number(tok, k, col)
    return FiniteMetricSpace(d)


def parse_matrix_json(text: str) -> FiniteMetricSpace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "d" not in data:
        raise ParseError("expected an object with a \"d\" matrix", 1, 1)
    rows = data["d"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("\"d\" must be a list of rows", 1, 1)
    n = len(rows)
    if "n" in data and data["n"] != n:
        raise ParseError(f"\"n\" is {data['n']} but \"d\" has {n} rows", 1, 1)
    d = np.empty((n, n))
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"row {i + 1} has {len(row)} entries, expected {n}", 1, 1)
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float, str)):
                raise ParseError(f"entry ({i}, {j}) is not a number", 1, 1)
            d[i, j] = _number(str(v), 1, 1) if isinstance(v, str) else float(v)
            if np.isnan(d[i, j]):
                raise ParseError(f"entry ({i}, {j}) is NaN", 1, 1)
    if n == 0:
        raise ParseError("empty matrix", 1, 1)
    labels = data.get("labels")
    if labels is not None and len(labels) != n:
        raise ParseError("need exactly one label per point", 1, 1)
    return FiniteMetricSpace(d, labels)


def parse_planar_csv(text: str) -> np.ndarray:
    pts = []
    for k, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected two comma separated values, got {len(parts)}", k, 1)
        col = 1
        xy = []
        for part in parts:
            tok = part.strip()
            lead = len(part) - len(part.lstrip())
            v = _number(tok, k, col + lead) if tok else None
            if v is None or not np.isfinite(v):
                raise ParseError(f"bad coordinate {tok!r}", k, col + lead)
            xy.append(v)
            col += len(part) + 1
        pts.append(xy)
    if not pts:
        raise ParseError("no points", 1, 1)
    return np.array(pts, dtype=np.float64)


def sniff(text: str) -> str:
    """``"json"``, ``"csv"`` or ``"text"``."""
    s = text.lstrip()
    if s.startswith("{"):
        return "json"
    first = s.splitlines()[0] if s else ""
    return "csv" if "," in first else "text"


def parse_space(text: str):
    """A :class:`FiniteMetricSpace` for matrix input, an ``(m, 2)`` array for planar CSV."""
    kind = sniff(text)
    if kind == "json":
        return parse_matrix_json(text)
    if kind == "csv":
        return parse_planar_csv(text)
    return parse_matrix_text(text)


def read_text(path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def read_space(path):
    return parse_space(read_text(path))


def read_matrix(path) -> FiniteMetricSpace:
    out = read_space(path)
    if not isinstance(out, FiniteMetricSpace):
        raise ParseError("expected a distance matrix, got a planar cloud", 1, 1)
    return out


def read_cloud(path) -> np.ndarray:
    out = read_space(path)
    if isinstance(out, FiniteMetricSpace):
        raise ParseError("expected a planar cloud, got a distance matrix", 1, 1)
    return out


# -- writing ---------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return "inf" if v == np.inf else repr(float(v))


def format_matrix_text(space: FiniteMetricSpace) -> str:
    """Exact (round-trip) text form."""
    lines = [str(space.n)]
    lines.extend(" ".join(_fmt(v) for v in row) for row in space.d)
    return "\n".join(lines) + "\n"


def matrix_json(space: FiniteMetricSpace) -> dict:
    out = {"n": space.n, "d": [[v if np.isfinite(v) else "inf" for v in row] for row in space.d.tolist()]}
    if space.labels is not None:
        out["labels"] = list(space.labels)
    return out


def format_matrix_json(space: FiniteMetricSpace) -> str:
    return json.dumps(matrix_json(space), sort_keys=True) + "\n"


def format_planar_csv(points) -> str:
    p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    return "".join(f"{_fmt(x)},{_fmt(y)}\n" for x, y in p)
