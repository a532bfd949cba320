"""Dense linear algebra on nested lists, exact or floating point.

Matrices here are at most a handful of rows, so plain Python loops are
both fast enough and the simplest way to keep ``Fraction`` entries exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import scalar as sc

Matrix = list[list[sc.Scalar]]


def identity(n: int, exact: bool = True) -> Matrix:
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def _eliminate(m: Sequence[Sequence], rhs: Matrix | None):
    """Gauss-Jordan with partial pivoting. Returns (det, solved rhs)."""
    n = len(m)
    a = [list(row) for row in m]
    b = [list(row) for row in rhs] if rhs is not None else None
    det = Fraction(1) if sc.all_exact(x for row in a for x in row) else 1.0
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[pivot][col] == 0:
            return det * 0, None
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            if b is not None:
                b[col], b[pivot] = b[pivot], b[col]
            det = -det
        p = a[col][col]
        det = det * p
        for r in range(n):
            if r == col or a[r][col] == 0:
                continue
            f = a[r][col] / p
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            if b is not None:
                b[r] = [x - f * y for x, y in zip(b[r], b[col])]
    if b is not None:
        b = [[x / a[i][i] for x in b[i]] for i in range(n)]
    return det, b


def det(m: Sequence[Sequence]) -> sc.Scalar:
    return _eliminate(m, None)[0]


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    exact = sc.all_exact(x for row in m for x in row)
    d, inv = _eliminate(m, identity(n, exact))
    if inv is None or (not exact and abs(d) <= sc.TAU_ABS):
        raise ZeroDivisionError("matrix is singular")
    return inv


def solve(m: Sequence[Sequence], v: Sequence) -> list:
    _, x = _eliminate(m, [[vi] for vi in v])
    if x is None:
        raise ZeroDivisionError("matrix is singular")
    return [row[0] for row in x]


def to_float(m: Sequence[Sequence]) -> list[list[float]]:
    return [[float(x) for x in row] for row in m]


def rank(rows: Sequence[Sequence], rel: float = 1e-9) -> int:
    """Row rank; exact elimination for rationals, SVD with a relative cutoff otherwise."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    if sc.all_exact(x for r in rows for x in r):
        a = [[Fraction(x) for x in r] for r in rows]
        r = 0
        for col in range(len(a[0])):
            pivot = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
            if pivot is None:
                continue
            a[r], a[pivot] = a[pivot], a[r]
            for i in range(r + 1, len(a)):
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            r += 1
        return r
    import numpy as np

    s = np.linalg.svd(np.array(to_float(rows)), compute_uv=False)
    return int((s > rel * max(s[0], 1.0)).sum()) if s.size else 0


def in_span(generators: Sequence[Sequence], v: Sequence, rel: float = 1e-9) -> bool:
    """Whether ``v`` lies in the span of ``generators`` (empty span = {0})."""
    if not generators:
        return all(x == 0 for x in v) if sc.all_exact(v) else max(abs(float(x)) for x in v) < rel
    return rank(list(generators) + [list(v)], rel) == rank(generators, rel)


def nullspace(m: Sequence[Sequence], rel: float = 1e-9) -> list[list]:
    """Basis of {x : m x = 0}; exact reduced row echelon for rationals, SVD otherwise."""
    rows = [list(r) for r in m]
    n = len(rows[0])
    if not sc.all_exact(x for r in rows for x in r):
        import numpy as np

        _, s, vt = np.linalg.svd(np.array(to_float(rows)))
        cut = rel * max(s[0] if s.size else 0.0, 1.0)
        r = int((s > cut).sum())
        return [list(map(float, vt[k])) for k in range(r, n)]
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        a[r] = [x / a[r][col] for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        x = [Fraction(0)] * n
        x[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -a[i][free]
        basis.append(x)
    return basis
