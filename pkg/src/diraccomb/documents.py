"""Text documents for combs, test functions, point lists and exponential sums.

Documents are JSON laid out one item per line.  Every number is a string so exact
values survive (``"1/3"``).  A coefficient is either a rational string or a
complex ``["re", "im"]`` pair.
The ``regime`` tag (``exact`` or ``float``) fixes how strings are parsed.
"""
from __future__ import annotations

import json
from numbers import Rational
from typing import Any

from .almostperiodic import ExponentialSum
from .comb import CombDistribution, Component, Term, WindowedDistribution, _rebuild, _simplify, collect
from .lattice import LatticeBasis, LatticeCoset, format_scalar, parse_scalar
from .schwartz import TestFunction

KINDS = ("comb", "testfn", "points", "expsum")


class DocumentError(ValueError):
    """Malformed document; the message names the position or JSON path."""

    def __init__(self, message: str, where: str):
        super().__init__(f"{where}: {message}")
        self.where = where


# ---------------------------------------------------------------- writing

def _scalar(x) -> str:
    return format_scalar(x)


def _coeff(c) -> Any:
    if isinstance(c, Rational):
        return format_scalar(c)
    c = complex(c)
    return [format(c.real, ".17g"), format(c.imag, ".17g")]


LINE_WIDTH = 100


def _layout(value, indent: int) -> str:
    """Containers that fit on one line stay there; longer ones get one item per line."""
    flat = json.dumps(value, ensure_ascii=False, separators=(", ", ": "))
    if not isinstance(value, (dict, list)) or len(flat) + indent <= LINE_WIDTH or not value:
        return flat
    pad = " " * (indent + 1)
    if isinstance(value, dict):
        items = [f"{pad}{json.dumps(k)}: {_layout(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    items = [pad + _layout(v, indent + 1) for v in value]
    return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"


def _dump(doc: dict) -> str:
    return _layout(doc, 0) + "\n"


def comb_to_doc(f: CombDistribution) -> dict:
    f = collect(f)
    return {
        "kind": "comb",
        "regime": "exact" if f.exact else "float",
        "dim": f.dim,
        "components": [
            {
                "lattice": [[_scalar(x) for x in row] for row in comp.coset.lattice.matrix],
                "translate": [_scalar(x) for x in comp.coset.translate],
                "terms": [
                    {"k": list(t.k), "m": list(t.m), "omega": [_scalar(x) for x in t.omega], "c": _coeff(t.c)}
                    for t in comp.terms
                ],
            }
            for comp in f.components
        ],
    }


def testfn_to_doc(phi: TestFunction) -> dict:
    return {
        "kind": "testfn",
        "dim": phi.dim,
        "a": _scalar(phi.a),
        "x0": [_scalar(x) for x in phi.x0],
        "xi0": [_scalar(x) for x in phi.xi0],
        "poly": [{"m": list(m), "c": _coeff(c)} for m, c in phi.poly],
    }


def points_to_doc(points, dim: int) -> dict:
    pts = [tuple(p) for p in points]
    exact = all(isinstance(x, Rational) for p in pts for x in p)
    return {
        "kind": "points",
        "regime": "exact" if exact else "float",
        "dim": dim,
        "points": [[_scalar(x) for x in p] for p in sorted(pts)],
    }


def expsum_to_doc(g: ExponentialSum) -> dict:
    return {
        "kind": "expsum",
        "dim": g.dim,
        "terms": [{"a": _coeff(a), "s": [_scalar(x) for x in s]} for a, s in g.terms],
    }


def dumps(obj) -> str:
    if isinstance(obj, CombDistribution):
        return _dump(comb_to_doc(obj))
    if isinstance(obj, TestFunction):
        return _dump(testfn_to_doc(obj))
    if isinstance(obj, ExponentialSum):
        return _dump(expsum_to_doc(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def window_columns(w: WindowedDistribution) -> str:
    """One line per (point, k): coordinates, derivative orders, re, im."""
    d = w.dim
    header = " ".join([f"x{i}" for i in range(d)] + [f"k{i}" for i in range(d)] + ["re", "im"])
    lines = ["# " + header]
    for p, items in w.entries:
        for k, c in items:
            z = complex(c)
            cols = [format_scalar(x) for x in p] + [str(x) for x in k] + [format(z.real, ".17g"), format(z.imag, ".17g")]
            lines.append(" ".join(cols))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- reading

def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object", "$")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"kind must be one of {', '.join(KINDS)}", "$.kind")
    return doc


def _get(obj, key, path, kind):
    if not isinstance(obj, dict):
        raise DocumentError("expected an object", path)
    if key not in obj:
        raise DocumentError("missing field", f"{path}.{key}")
    value = obj[key]
    if not isinstance(value, kind):
        raise DocumentError(f"expected {kind.__name__ if isinstance(kind, type) else 'value'}", f"{path}.{key}")
    return value


def _num(text, exact: bool, path: str):
    if not isinstance(text, str):
        raise DocumentError("numbers must be strings", path)
    try:
        return parse_scalar(text, exact)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"not a number: {text!r}", path) from None


def _vec(obj, key, path, exact, dim):
    items = _get(obj, key, path, list)
    if len(items) != dim:
        raise DocumentError(f"expected {dim} entries", f"{path}.{key}")
    return tuple(_num(x, exact, f"{path}.{key}[{i}]") for i, x in enumerate(items))


def _index(obj, key, path, dim):
    items = _get(obj, key, path, list)
    if len(items) != dim or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in items):
        raise DocumentError(f"expected {dim} nonnegative integers", f"{path}.{key}")
    return tuple(items)


def _parse_coeff(value, exact: bool, path: str):
    if isinstance(value, list):
        if len(value) != 2:
            raise DocumentError("complex coefficients are [re, im]", path)
        re_, im_ = (float(_num(v, False, f"{path}[{i}]")) for i, v in enumerate(value))
        return complex(re_, im_)
    # a bare string is a rational coefficient in either regime
    return _simplify(_num(value, True, path))


def _regime(doc) -> bool:
    regime = doc.get("regime", "exact")
    if regime not in ("exact", "float"):
        raise DocumentError("regime must be 'exact' or 'float'", "$.regime")
    return regime == "exact"


def _dim(doc) -> int:
    d = _get(doc, "dim", "$", int)
    if d < 1:
        raise DocumentError("dimension must be positive", "$.dim")
    return d


def _expect(doc, kind):
    if doc["kind"] != kind:
        raise DocumentError(f"expected a {kind} document, got {doc['kind']}", "$.kind")


def comb_from_doc(doc: dict) -> CombDistribution:
    _expect(doc, "comb")
    exact = _regime(doc)
    d = _dim(doc)
    comps = []
    for i, comp in enumerate(_get(doc, "components", "$", list)):
        path = f"$.components[{i}]"
        rows = _get(comp, "lattice", path, list)
        if len(rows) != d:
            raise DocumentError(f"expected {d} rows", f"{path}.lattice")
        matrix = tuple(
            tuple(_num(x, exact, f"{path}.lattice[{r}][{c}]") for c, x in enumerate(_expect_row(row, d, f"{path}.lattice[{r}]")))
            for r, row in enumerate(rows)
        )
        try:
            lattice = LatticeBasis(matrix)
        except ValueError as exc:
            raise DocumentError(str(exc), f"{path}.lattice") from None
        translate = _vec(comp, "translate", path, exact, d)
        terms = []
        for j, t in enumerate(_get(comp, "terms", path, list)):
            tpath = f"{path}.terms[{j}]"
            k = _index(t, "k", tpath, d)
            m = _index(t, "m", tpath, d)
            omega = _vec(t, "omega", tpath, exact, d)
            if "c" not in t:
                raise DocumentError("missing field", f"{tpath}.c")
            terms.append(Term(k, m, omega, _parse_coeff(t["c"], exact, f"{tpath}.c")))
        comps.append(Component(LatticeCoset(lattice, translate), tuple(terms)))
    return collect(_rebuild(CombDistribution(d, ()), comps))


def _expect_row(row, d, path):
    if not isinstance(row, list) or len(row) != d:
        raise DocumentError(f"expected a row of {d} entries", path)
    return row


def testfn_from_doc(doc: dict) -> TestFunction:
    _expect(doc, "testfn")
    d = _dim(doc)
    a = float(_num(_get(doc, "a", "$", str), False, "$.a"))
    x0 = _vec(doc, "x0", "$", False, d)
    xi0 = _vec(doc, "xi0", "$", False, d)
    poly = []
    for i, item in enumerate(_get(doc, "poly", "$", list)):
        path = f"$.poly[{i}]"
        m = _index(item, "m", path, d)
        if "c" not in item:
            raise DocumentError("missing field", f"{path}.c")
        poly.append((m, complex(_parse_coeff(item["c"], False, f"{path}.c"))))
    try:
        return TestFunction(d, a, x0, xi0, tuple(poly))
    except ValueError as exc:
        raise DocumentError(str(exc), "$") from None


def points_from_doc(doc: dict) -> list[tuple]:
    _expect(doc, "points")
    exact = _regime(doc)
    d = _dim(doc)
    out = []
    for i, p in enumerate(_get(doc, "points", "$", list)):
        row = _expect_row(p, d, f"$.points[{i}]")
        out.append(tuple(_num(x, exact, f"$.points[{i}][{j}]") for j, x in enumerate(row)))
    return out


def expsum_from_doc(doc: dict) -> ExponentialSum:
    _expect(doc, "expsum")
    d = _dim(doc)
    terms = []
    for i, t in enumerate(_get(doc, "terms", "$", list)):
        path = f"$.terms[{i}]"
        if "a" not in t:
            raise DocumentError("missing field", f"{path}.a")
        terms.append((complex(_parse_coeff(t["a"], False, f"{path}.a")), _vec(t, "s", path, False, d)))
    return ExponentialSum(d, tuple(terms))


def parse(text: str):
    """Parse any document into its object (points come back as a list of tuples)."""
    doc = loads(text)
    return {
        "comb": comb_from_doc,
        "testfn": testfn_from_doc,
        "points": points_from_doc,
        "expsum": expsum_from_doc,
    }[doc["kind"]](doc)
