from fractions import Fraction

import pytest

from harmonic_lie import expr, linalg
from harmonic_lie import scalar as sc


def test_tolerance_bound_uses_floor():
    tol = sc.Tolerance()
    assert tol.bound(1.0) == 1e-9
    assert tol.bound(1e-6) == 1e-12


@pytest.mark.parametrize("rel,abs_", [(0, 1e-12), (1e-9, -1.0)])
def test_tolerance_rejects_nonpositive(rel, abs_):
    with pytest.raises(ValueError):
        sc.Tolerance(rel, abs_)


def test_to_scalar_modes():
    assert sc.to_scalar("3/4") == Fraction(3, 4)
    assert isinstance(sc.to_scalar("3/4", exact=False), float)
    assert sc.to_scalar(2) == Fraction(2)
    assert sc.to_scalar(0.5) == 0.5
    with pytest.raises(TypeError):
        sc.to_scalar(True)


def test_sqrt_exact_for_perfect_squares():
    assert sc.sqrt(Fraction(49, 4)) == Fraction(7, 2)
    r = sc.sqrt(Fraction(2))
    assert isinstance(r, sc.InexactSqrt)
    assert not sc.is_exact(r)
    assert abs(r - 2 ** 0.5) < 1e-15
    with pytest.raises(ValueError):
        sc.sqrt(Fraction(-1))


def test_is_zero_and_close():
    assert sc.is_zero(Fraction(0))
    assert not sc.is_zero(Fraction(1, 10 ** 30))
    assert sc.is_zero(1e-13)
    assert sc.close(1.0, 1.0 + 1e-10)
    assert not sc.close(1.0, 1.0 + 1e-6)


def test_fmt_and_json():
    assert sc.fmt(Fraction(6, 4)) == "3/2"
    assert sc.fmt(Fraction(4)) == "4"
    assert sc.to_json_value(Fraction(-1, 3)) == "-1/3"
    assert sc.to_json_value(Fraction(5)) == 5
    assert sc.to_json_value(0.25) == 0.25


def test_expr_evaluates_exactly():
    env = {"A": Fraction(5), "B": Fraction(3), "eps": 1, "del": -1}
    assert expr.evaluate("eps*sqrt(A**2-B**2)", env) == 4
    assert expr.evaluate("del*A/2", env) == Fraction(-5, 2)
    assert expr.names("del*A+sqrt(B)") == {"del", "A", "B"}


@pytest.mark.parametrize("bad", ["__import__('os')", "A.real", "[1]", "lambda: 1", "1 if A else 2"])
def test_expr_rejects_unsafe_syntax(bad):
    with pytest.raises(expr.ExprError):
        expr.evaluate(bad, {"A": 1})


def test_expr_unbound_and_zero_division():
    with pytest.raises(expr.ExprError):
        expr.evaluate("Q+1", {})
    with pytest.raises(ZeroDivisionError):
        expr.evaluate("1/(A-A)", {"A": Fraction(2)})


def test_linalg_inverse_and_solve():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    inv = linalg.inverse(m)
    assert linalg.matmul(m, inv) == linalg.identity(2)
    assert linalg.solve(m, [Fraction(3), Fraction(2)]) == [1, 1]
    assert linalg.det(m) == 1
    with pytest.raises(ZeroDivisionError):
        linalg.inverse([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])


def test_rank_and_span():
    rows = [(1, 0, 0, 0), (0, 1, 1, 0), (1, 1, 1, 0)]
    rows = [tuple(Fraction(x) for x in r) for r in rows]
    assert linalg.rank(rows) == 2
    assert linalg.in_span(rows[:2], (Fraction(2), Fraction(-1), Fraction(-1), Fraction(0)))
    assert not linalg.in_span(rows[:2], (Fraction(0), Fraction(1), Fraction(0), Fraction(0)))
    assert linalg.in_span([], (0, 0, 0, 0))
    assert linalg.rank([(1.0, 2.0), (2.0, 4.0 + 1e-14)]) == 1
