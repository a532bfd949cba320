"""Scalars that are either exact rationals or doubles.

Exact mode uses :class:`fractions.Fraction` throughout; float mode uses plain
``float``. Arithmetic is ordinary Python arithmetic, so every routine in the
package works in both modes without branching. A ``Fraction`` mixed with a
``float`` degrades to ``float``, which is the intended failover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Scalar = Union[Fraction, float, int]

TAU_REL = 1e-9
TAU_ABS = 1e-12


@dataclass(frozen=True)
class Tolerance:
    rel: float = TAU_REL
    abs: float = TAU_ABS

    def __post_init__(self):
        if not (self.rel > 0 and self.abs > 0):
            raise ValueError("tolerances must be positive")

    def bound(self, scale: float = 1.0) -> float:
        """Threshold below which a residual at the given scale counts as zero."""
        return max(self.rel * float(scale), self.abs)


DEFAULT_TOL = Tolerance()


class InexactSqrt(float):
    """Float result of a square root that had no rational value.

    Behaves as a float; the subclass only exists so callers can detect
    that exact mode was abandoned.
    """


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def all_exact(values: Iterable) -> bool:
    return all(is_exact(v) for v in values)


def to_scalar(value, exact: bool = True) -> Scalar:
    """Parse ``value`` (number or ``"p/q"`` string) into a scalar.

    Strings and ints become ``Fraction`` in exact mode. Floats are kept as
    floats unless they came from a string.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, str):
        text = value.strip()
        try:
            q = Fraction(text)
        except ValueError:
            return float(text)
        return q if exact else float(q)
    if isinstance(value, Rational):
        return Fraction(value) if exact else float(value)
    if isinstance(value, float):
        return value
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def _isqrt_exact(n: int):
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def sqrt(x: Scalar) -> Scalar:
    """Square root that stays exact when the answer is rational.

    Returns a ``Fraction`` for perfect-square rationals, otherwise an
    :class:`InexactSqrt`. Negative input raises ``ValueError``.
    """
    if x < 0:
        raise ValueError(f"square root of negative value {x}")
    if is_exact(x):
        q = Fraction(x)
        num = _isqrt_exact(q.numerator)
        den = _isqrt_exact(q.denominator)
        if num is not None and den is not None:
            return Fraction(num, den)
        return InexactSqrt(math.sqrt(float(q)))
    return InexactSqrt(math.sqrt(x)) if isinstance(x, InexactSqrt) else math.sqrt(x)


def is_zero(x: Scalar, tol: Tolerance = DEFAULT_TOL, scale: float = 1.0) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) < tol.bound(scale)


def close(x: Scalar, y: Scalar, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Relative comparison with an absolute floor."""
    if is_exact(x) and is_exact(y):
        return x == y
    return abs(x - y) <= max(tol.rel * max(abs(x), abs(y)), tol.abs)


def fmt(x: Scalar) -> str:
    """Stable text form: ``p/q`` for rationals, ``repr`` for floats."""
    if is_exact(x):
        q = Fraction(x)
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return repr(float(x))


def to_json_value(x: Scalar):
    if is_exact(x):
        q = Fraction(x)
        return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return float(x)
