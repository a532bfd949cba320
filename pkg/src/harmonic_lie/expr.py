"""Tiny arithmetic expression language shared by the catalog and the claims.

Expressions are ordinary Python arithmetic over named parameters, e.g.
``"eps*sqrt(A**2-B**2)/2"``. They are parsed once with :mod:`ast` and
evaluated with exact rationals whenever the inputs are exact.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from . import scalar as sc

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


class ExprError(ValueError):
    pass


# ``del`` is a Python keyword but a natural name for a sign parameter
_KEYWORD_ALIASES = {"del": "del_"}
_ALIAS_RE = re.compile(r"\b(" + "|".join(_KEYWORD_ALIASES) + r")\b")
_UNALIAS = {v: k for k, v in _KEYWORD_ALIASES.items()}


@lru_cache(maxsize=None)
def parse(text: str) -> ast.expr:
    try:
        tree = ast.parse(_ALIAS_RE.sub(lambda m: _KEYWORD_ALIASES[m.group(1)], text), mode="eval")
    except SyntaxError as exc:
        raise ExprError(f"bad expression {text!r}: {exc.msg}") from None
    _check(tree.body, text)
    return tree.body


def _check(node, text):
    if isinstance(node, ast.BinOp):
        if type(node.op) not in _BINOPS and not isinstance(node.op, ast.Pow):
            raise ExprError(f"operator not allowed in {text!r}")
        _check(node.left, text)
        _check(node.right, text)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.USub, ast.UAdd)):
            raise ExprError(f"operator not allowed in {text!r}")
        _check(node.operand, text)
    elif isinstance(node, ast.Call):
        if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1):
            raise ExprError(f"only sqrt(x) calls are allowed in {text!r}")
        _check(node.args[0], text)
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)) or isinstance(node.value, bool):
            raise ExprError(f"bad literal in {text!r}")
    elif not isinstance(node, ast.Name):
        raise ExprError(f"unsupported syntax in {text!r}")


def names(text: str) -> set[str]:
    return {_UNALIAS.get(n.id, n.id) for n in ast.walk(parse(text)) if isinstance(n, ast.Name) and n.id != "sqrt"}


def evaluate(text: str, env: Mapping[str, sc.Scalar]) -> sc.Scalar:
    """Evaluate ``text`` with variables from ``env``.

    Integer literals are exact, so the result is a ``Fraction`` when all
    variables are exact and every ``sqrt`` argument is a perfect square.
    """
    return _eval(parse(text), env, text)


def _eval(node, env, text):
    if isinstance(node, ast.Constant):
        v = node.value
        return Fraction(v) if isinstance(v, int) else v
    if isinstance(node, ast.Name):
        try:
            return env[_UNALIAS.get(node.id, node.id)]
        except KeyError:
            raise ExprError(f"unbound parameter {node.id!r} in {text!r}") from None
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval(node.left, env, text)
        b = _eval(node.right, env, text)
        if isinstance(node.op, ast.Pow):
            if sc.is_exact(b) and Fraction(b).denominator == 1:
                return a ** int(b)
            return float(a) ** float(b)
        if isinstance(node.op, ast.Div) and b == 0:
            raise ZeroDivisionError(f"division by zero in {text!r}")
        return _BINOPS[type(node.op)](a, b)
    if isinstance(node, ast.Call):
        arg = _eval(node.args[0], env, text)
        return sc.sqrt(arg)
    raise ExprError(f"unsupported node in {text!r}")  # pragma: no cover
