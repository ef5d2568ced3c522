"""Text and JSON forms of set expressions.

S-expression grammar::

    expr := (full) | (empty) | (class i [k]) | (interval cut cut)
          | (fin q ...) | (union expr ...) | (inter expr ...) | (diff expr expr)
    cut  := -inf | inf | q | (sqrt2-plus q) | (quad a b)

``(sqrt2-plus -3)`` is sqrt(2) - 3 and ``(quad a b)`` is a + b*sqrt(2).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, List, Union as U

from .canonical import CanonicalSet
from .cuts import Cut, parse_cut
from .expr import (
    DEFAULT_MODULUS,
    DenseClass,
    Diff,
    FiniteSet,
    Full,
    Intersect,
    Interval,
    QSetExpr,
    Union,
)

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokenize(text: str) -> List[str]:
    return _TOKEN.findall(text)


def _read(tokens: List[str], pos: int):
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            item, pos = _read(tokens, pos)
            items.append(item)
        if pos >= len(tokens):
            raise ValueError("unbalanced parentheses")
        return items, pos + 1
    if tok == ")":
        raise ValueError("unexpected ')'")
    return tok, pos + 1


def _cut_from(tree) -> Cut:
    if isinstance(tree, str):
        return parse_cut(tree)
    head = tree[0]
    if head == "sqrt2-plus" and len(tree) == 2:
        return Cut.quadratic(Fraction(tree[1]), 1)
    if head == "quad" and len(tree) == 3:
        return Cut.quadratic(Fraction(tree[1]), Fraction(tree[2]))
    raise ValueError(f"bad cut {tree!r}")


def _expr_from(tree, modulus: int) -> QSetExpr:
    if isinstance(tree, str) or not tree:
        raise ValueError(f"bad expression {tree!r}")
    head, args = tree[0], tree[1:]
    if head == "full":
        return Full()
    if head == "empty":
        return FiniteSet()
    if head == "class":
        k = int(args[1]) if len(args) > 1 else modulus
        return DenseClass(int(args[0]), k)
    if head == "interval":
        if len(args) != 2:
            raise ValueError("interval takes two cuts")
        return Interval(_cut_from(args[0]), _cut_from(args[1]))
    if head == "fin":
        return FiniteSet(Fraction(a) for a in args)
    if head == "union":
        return Union(_expr_from(a, modulus) for a in args)
    if head == "inter":
        return Intersect(_expr_from(a, modulus) for a in args)
    if head == "diff":
        if len(args) != 2:
            raise ValueError("diff takes two expressions")
        return Diff(_expr_from(args[0], modulus), _expr_from(args[1], modulus))
    raise ValueError(f"unknown operator {head!r}")


def parse_sexpr(text: str, modulus: int = DEFAULT_MODULUS) -> QSetExpr:
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("empty input")
    tree, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise ValueError("trailing tokens after expression")
    return _expr_from(tree, modulus)


def _cut_text(c: Cut) -> str:
    if not c.is_finite or c.is_rational:
        return str(c)
    if c.b == 1:
        return f"(sqrt2-plus {c.a})"
    return f"(quad {c.a} {c.b})"


def to_sexpr(expr: QSetExpr, modulus: int = DEFAULT_MODULUS) -> str:
    if isinstance(expr, CanonicalSet):
        expr = expr.to_expr()
    if isinstance(expr, Full):
        return "(full)"
    if isinstance(expr, DenseClass):
        if expr.k == modulus:
            return f"(class {expr.i})"
        return f"(class {expr.i} {expr.k})"
    if isinstance(expr, Interval):
        return f"(interval {_cut_text(expr.lo)} {_cut_text(expr.hi)})"
    if isinstance(expr, FiniteSet):
        if not expr.points:
            return "(empty)"
        return "(fin " + " ".join(str(p) for p in sorted(expr.points)) + ")"
    if isinstance(expr, Union):
        return "(union" + "".join(" " + to_sexpr(a, modulus) for a in expr.args) + ")"
    if isinstance(expr, Intersect):
        return "(inter" + "".join(" " + to_sexpr(a, modulus) for a in expr.args) + ")"
    if isinstance(expr, Diff):
        return f"(diff {to_sexpr(expr.left, modulus)} {to_sexpr(expr.right, modulus)})"
    raise TypeError(f"not a set expression: {expr!r}")


def cut_to_json(c: Cut) -> U[str, dict]:
    if not c.is_finite or c.is_rational:
        return str(c)
    return {"a": str(c.a), "b": str(c.b)}


def cut_from_json(obj) -> Cut:
    if isinstance(obj, str):
        return parse_cut(obj)
    if isinstance(obj, int):
        return Cut.of(obj)
    return Cut.quadratic(Fraction(obj["a"]), Fraction(obj["b"]))


def to_json(expr: QSetExpr) -> Any:
    if isinstance(expr, CanonicalSet):
        expr = expr.to_expr()
    if isinstance(expr, Full):
        return {"op": "full"}
    if isinstance(expr, DenseClass):
        return {"op": "class", "i": expr.i, "k": expr.k}
    if isinstance(expr, Interval):
        return {"op": "interval", "lo": cut_to_json(expr.lo), "hi": cut_to_json(expr.hi)}
    if isinstance(expr, FiniteSet):
        return {"op": "fin", "points": [str(p) for p in sorted(expr.points)]}
    if isinstance(expr, Union):
        return {"op": "union", "args": [to_json(a) for a in expr.args]}
    if isinstance(expr, Intersect):
        return {"op": "inter", "args": [to_json(a) for a in expr.args]}
    if isinstance(expr, Diff):
        return {"op": "diff", "args": [to_json(expr.left), to_json(expr.right)]}
    raise TypeError(f"not a set expression: {expr!r}")


def from_json(obj: Any, modulus: int = DEFAULT_MODULUS) -> QSetExpr:
    op = obj["op"]
    if op == "full":
        return Full()
    if op == "class":
        return DenseClass(int(obj["i"]), int(obj.get("k", modulus)))
    if op == "interval":
        return Interval(cut_from_json(obj["lo"]), cut_from_json(obj["hi"]))
    if op == "fin":
        return FiniteSet(Fraction(p) for p in obj["points"])
    if op == "empty":
        return FiniteSet()
    if op == "union":
        return Union(from_json(a, modulus) for a in obj["args"])
    if op == "inter":
        return Intersect(from_json(a, modulus) for a in obj["args"])
    if op == "diff":
        left, right = obj["args"]
        return Diff(from_json(left, modulus), from_json(right, modulus))
    raise ValueError(f"unknown operator {op!r}")
