"""Metric Lie algebras: structure constants, inner product, Levi-Civita
connection, curvature and Ricci tensor, all computed from the brackets.

Vectors are plain tuples of coefficients in the working basis. Every
routine is generic over ``Fraction`` and ``float`` entries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from . import linalg
from . import scalar as sc
from .scalar import DEFAULT_TOL, Scalar, Tolerance

Vector = tuple


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # "antisymmetry" | "jacobi" | "metric-symmetry" | "degenerate-metric"
    index: tuple
    residual: float

    def __str__(self):
        idx = ",".join(str(i + 1) for i in self.index)
        return f"{self.kind} at ({idx}): residual {self.residual:.3g}"


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    """Structure constants ``c[i][j][k]`` with ``[e_i, e_j] = sum_k c[i][j][k] e_k``
    and a symmetric bilinear form ``metric[i][j] = g(e_i, e_j)``."""

    structure: tuple
    metric: tuple
    label: str = ""

    def __post_init__(self):
        n = len(self.metric)
        c = tuple(tuple(tuple(row) for row in plane) for plane in self.structure)
        g = tuple(tuple(row) for row in self.metric)
        if len(c) != n or any(len(p) != n or any(len(r) != n for r in p) for p in c):
            raise DimensionError("structure constants must be dim x dim x dim")
        if any(len(r) != n for r in g):
            raise DimensionError("metric must be square")
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "metric", g)

    @classmethod
    def from_brackets(cls, brackets: Mapping[tuple[int, int], Sequence], metric, label: str = ""):
        """Build from ``{(i, j): coeffs}`` with 0-based indices, filling in
        ``[e_j, e_i] = -[e_i, e_j]`` and zeros elsewhere."""
        n = len(metric)
        exact = sc.all_exact(x for row in metric for x in row)
        zero = Fraction(0) if exact else 0.0
        c = [[[zero] * n for _ in range(n)] for _ in range(n)]
        for (i, j), coeffs in brackets.items():
            if len(coeffs) != n:
                raise DimensionError(f"bracket [{i + 1},{j + 1}] has {len(coeffs)} coefficients, expected {n}")
            c[i][j] = list(coeffs)
            if (j, i) not in brackets:
                c[j][i] = [-x for x in coeffs]
        return cls(c, metric, label)

    @property
    def dim(self) -> int:
        return len(self.metric)

    @property
    def exact(self) -> bool:
        return sc.all_exact(self._entries())

    def _entries(self):
        yield from (x for p in self.structure for r in p for x in r)
        yield from (x for r in self.metric for x in r)

    @cached_property
    def metric_inverse(self):
        return linalg.inverse(self.metric)

    @cached_property
    def magnitude(self) -> float:
        """Largest absolute structure constant, used to scale tolerances."""
        return max((abs(float(x)) for p in self.structure for r in p for x in r), default=0.0)

    def basis(self, i: int) -> Vector:
        one, zero = (Fraction(1), Fraction(0)) if self.exact else (1.0, 0.0)
        return tuple(one if k == i else zero for k in range(self.dim))

    def zero(self) -> Vector:
        return tuple(Fraction(0) if self.exact else 0.0 for _ in range(self.dim))

    def check_vector(self, v: Sequence) -> Vector:
        if len(v) != self.dim:
            raise DimensionError(f"vector of length {len(v)} in a {self.dim}-dimensional algebra")
        return tuple(v)


# -- validation ---------------------------------------------------------------


def validate(alg: MetricLieAlgebra, tol: Tolerance = DEFAULT_TOL) -> list[Violation]:
    """Every violated Lie-algebra or metric axiom, with index and residual."""
    n, c, g = alg.dim, alg.structure, alg.metric
    out: list[Violation] = []
    s1 = 1.0 + alg.magnitude

    for i in range(n):
        for j in range(n):
            for k in range(n):
                r = c[i][j][k] + c[j][i][k]
                if not sc.is_zero(r, tol, s1):
                    if i <= j:
                        out.append(Violation("antisymmetry", (i, j, k), abs(float(r))))

    s2 = s1 * s1
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                for m in range(n):
                    r = sum(
                        c[j][l][p] * c[i][p][m] + c[l][i][p] * c[j][p][m] + c[i][j][p] * c[l][p][m]
                        for p in range(n)
                    )
                    if not sc.is_zero(r, tol, s2):
                        out.append(Violation("jacobi", (i, j, l, m), abs(float(r))))

    gscale = 1.0 + max(abs(float(x)) for row in g for x in row)
    for i in range(n):
        for j in range(i + 1, n):
            r = g[i][j] - g[j][i]
            if not sc.is_zero(r, tol, gscale):
                out.append(Violation("metric-symmetry", (i, j), abs(float(r))))
    d = linalg.det(g)
    if sc.is_zero(d, tol):
        out.append(Violation("degenerate-metric", (), abs(float(d))))
    return out


def signature(alg: MetricLieAlgebra) -> tuple[int, int]:
    """(number of positive, number of negative) eigenvalues of the metric."""
    import numpy as np

    w = np.linalg.eigvalsh(np.array(linalg.to_float(alg.metric)))
    return int((w > 0).sum()), int((w < 0).sum())


# -- bilinear operations ------------------------------------------------------


def bracket(alg: MetricLieAlgebra, x: Sequence, y: Sequence) -> Vector:
    x, y = alg.check_vector(x), alg.check_vector(y)
    n, c = alg.dim, alg.structure
    return tuple(
        sum(x[i] * y[j] * c[i][j][k] for i in range(n) if x[i] for j in range(n) if y[j]) for k in range(n)
    )


def inner(alg: MetricLieAlgebra, x: Sequence, y: Sequence) -> Scalar:
    x, y = alg.check_vector(x), alg.check_vector(y)
    g = alg.metric
    return sum(x[i] * g[i][j] * y[j] for i in range(alg.dim) for j in range(alg.dim))


def norm_squared(alg: MetricLieAlgebra, v: Sequence) -> Scalar:
    return inner(alg, v, v)


def add(*vs: Sequence) -> Vector:
    return tuple(sum(xs) for xs in zip(*vs))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(s: Scalar, v: Sequence) -> Vector:
    return tuple(s * a for a in v)


def euclid_norm(v: Sequence) -> float:
    return math.sqrt(sum(float(a) ** 2 for a in v))


# -- connection and curvature -------------------------------------------------


@dataclass(frozen=True, eq=False)
class Connection:
    """Levi-Civita connection coefficients: ``nabla_{e_i} e_j = sum_k gamma[i][j][k] e_k``."""

    alg: MetricLieAlgebra
    gamma: tuple

    @cached_property
    def magnitude(self) -> float:
        m = max((abs(float(x)) for p in self.gamma for r in p for x in r), default=0.0)
        return max(m, self.alg.magnitude)

    def nabla(self, x: Sequence, v: Sequence) -> Vector:
        return covariant_derivative(self, x, v)


def koszul_connection(alg: MetricLieAlgebra) -> Connection:
    """Solve the Koszul formula for left-invariant fields.

    With constant metric coefficients only bracket terms survive:
    ``2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)``.
    """
    n, c, g = alg.dim, alg.structure, alg.metric
    try:
        ginv = alg.metric_inverse
    except ZeroDivisionError:
        raise ValueError("degenerate metric") from None
    half = Fraction(1, 2) if alg.exact else 0.5
    # cg[i][j][l] = g([e_i, e_j], e_l)
    cg = [[[sum(c[i][j][k] * g[k][l] for k in range(n)) for l in range(n)] for j in range(n)] for i in range(n)]
    gamma = []
    for i in range(n):
        plane = []
        for j in range(n):
            low = [half * (cg[i][j][l] - cg[j][l][i] + cg[l][i][j]) for l in range(n)]
            plane.append(tuple(sum(low[l] * ginv[l][k] for l in range(n)) for k in range(n)))
        gamma.append(tuple(plane))
    return Connection(alg, tuple(gamma))


def covariant_derivative(conn: Connection, x: Sequence, v: Sequence) -> Vector:
    """``nabla_X V`` for constant-coefficient fields."""
    alg = conn.alg
    x, v = alg.check_vector(x), alg.check_vector(v)
    n, gm = alg.dim, conn.gamma
    return tuple(
        sum(x[i] * v[j] * gm[i][j][k] for i in range(n) if x[i] for j in range(n) if v[j]) for k in range(n)
    )


def curvature(conn: Connection, x: Sequence, y: Sequence, z: Sequence) -> Vector:
    """``R(X,Y)Z = nabla_[X,Y] Z - nabla_X nabla_Y Z + nabla_Y nabla_X Z``."""
    nab = conn.nabla
    a = nab(bracket(conn.alg, x, y), z)
    b = nab(x, nab(y, z))
    c = nab(y, nab(x, z))
    return tuple(p - q + r for p, q, r in zip(a, b, c))


def ricci(conn: Connection) -> list[list[Scalar]]:
    """Ricci tensor ``Ric(Y,Z) = tr(X -> -R(X,Y)Z)``.

    The minus sign undoes the curvature sign convention above, so that
    a negatively curved plane has negative Ricci curvature.
    """
    alg = conn.alg
    n = alg.dim
    e = [alg.basis(i) for i in range(n)]
    ric = [[None] * n for _ in range(n)]
    for j in range(n):
        for l in range(j, n):
            total = 0
            for i in range(n):
                rv = curvature(conn, e[i], e[j], e[l])
                # contraction with g^{ik} g_{km} picks out the i-th component
                total += rv[i]
            ric[j][l] = ric[l][j] = -total
    return ric


def scalar_curvature(conn: Connection) -> Scalar:
    ric = ricci(conn)
    ginv = conn.alg.metric_inverse
    n = conn.alg.dim
    return sum(ginv[i][j] * ric[i][j] for i in range(n) for j in range(n))


@dataclass(frozen=True)
class NotEinstein:
    residual: float
    lam: Scalar

    def __bool__(self):
        return False


def einstein_factor(conn: Connection, tol: Tolerance = DEFAULT_TOL) -> Scalar | NotEinstein:
    """``lambda`` with ``Ric = lambda g``, or :class:`NotEinstein` with the residual."""
    alg = conn.alg
    n, g = alg.dim, alg.metric
    ric = ricci(conn)
    lam = scalar_curvature(conn) / n
    res = max(abs(ric[i][j] - lam * g[i][j]) for i in range(n) for j in range(n))
    if sc.is_exact(res):
        return lam if res == 0 else NotEinstein(float(res), lam)
    s = 1.0 + max(abs(float(x)) for row in ric for x in row)
    return lam if float(res) < tol.bound(s) else NotEinstein(float(res), lam)


# -- basis change -------------------------------------------------------------


def check_basis_change(p: Sequence[Sequence], tol: Tolerance = DEFAULT_TOL):
    if sc.is_zero(linalg.det(p), tol):
        raise ValueError("basis change matrix is singular")
    return [list(r) for r in p]


def change_basis(alg: MetricLieAlgebra, p: Sequence[Sequence], label: str | None = None) -> MetricLieAlgebra:
    """Re-express ``alg`` in the basis ``f_i = sum_a p[a][i] e_a``.

    Columns of ``p`` are the new basis vectors written in the old basis.
    """
    p = check_basis_change(p)
    n, c = alg.dim, alg.structure
    pinv = linalg.inverse(p)
    g2 = linalg.matmul(linalg.matmul(linalg.transpose(p), alg.metric), p)
    c2 = []
    for i in range(n):
        plane = []
        for j in range(n):
            old = [
                sum(p[a][i] * p[b][j] * c[a][b][k] for a in range(n) if p[a][i] for b in range(n) if p[b][j])
                for k in range(n)
            ]
            plane.append([sum(pinv[m][k] * old[k] for k in range(n)) for m in range(n)])
        c2.append(plane)
    return MetricLieAlgebra(c2, g2, alg.label if label is None else label)


def to_new_basis(p: Sequence[Sequence], v_old: Sequence) -> Vector:
    """Coefficients in the new basis of a vector given in the old one."""
    return tuple(linalg.solve(p, list(v_old)))


def to_old_basis(p: Sequence[Sequence], v_new: Sequence) -> Vector:
    return tuple(linalg.matvec(p, v_new))


# -- JSON ---------------------------------------------------------------------


def to_json(alg: MetricLieAlgebra) -> dict:
    """JSON algebra format with 1-based indices; only i<j brackets are listed."""
    n = alg.dim
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            coeffs = alg.structure[i][j]
            if any(x != 0 for x in coeffs):
                brackets.append({"i": i + 1, "j": j + 1, "coeffs": [sc.to_json_value(x) for x in coeffs]})
    return {
        "schema": "v1",
        "dim": n,
        "metric": [[sc.to_json_value(x) for x in row] for row in alg.metric],
        "brackets": brackets,
    }


def from_json(data: Mapping | str, exact: bool = True) -> MetricLieAlgebra:
    """Parse the JSON algebra format. Rationals may be ``"p/q"`` strings."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        n = int(data["dim"])
        metric = [[sc.to_scalar(x, exact) for x in row] for row in data["metric"]]
        if len(metric) != n:
            raise DimensionError(f"metric has {len(metric)} rows, dim is {n}")
        brackets = {}
        for entry in data.get("brackets", []):
            i, j = int(entry["i"]) - 1, int(entry["j"]) - 1
            if not (0 <= i < n and 0 <= j < n):
                raise DimensionError(f"bracket index out of range: ({i + 1},{j + 1})")
            brackets[(i, j)] = [sc.to_scalar(x, exact) for x in entry["coeffs"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed algebra JSON: {exc}") from None
    if exact and not all(sc.is_exact(x) for row in metric for x in row):
        metric = [[float(x) for x in row] for row in metric]
    return MetricLieAlgebra.from_brackets(brackets, metric, data.get("label", ""))
