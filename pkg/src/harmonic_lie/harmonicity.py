"""Variational and kinematic tests for left-invariant vector fields.

All quantities are computed from a :class:`~harmonic_lie.algebra.Connection`
in whatever basis the algebra is written in; sums over a frame use the
inverse metric, so a pseudo-orthonormal frame is not required.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import algebra as al
from . import scalar as sc
from .algebra import Connection, Vector
from .scalar import DEFAULT_TOL, Scalar, Tolerance

ZERO, EIGEN, NOT_COLLINEAR = "Zero", "Eigen", "NotCollinear"


def _scale(conn: Connection, v: Sequence, order: int, degree: int = 1) -> float:
    # Residuals of a quantity built from `order` connection factors and
    # `degree` copies of V grow like this product.
    return (1.0 + conn.magnitude) ** order * (1.0 + al.euclid_norm(v)) ** degree


def _vanishes(v: Sequence, tol: Tolerance, scale: float) -> tuple[bool, float, float]:
    """(is zero, Euclidean size, threshold used); exact input uses a zero threshold."""
    r = al.euclid_norm(v)
    if sc.all_exact(v):
        return all(x == 0 for x in v), r, 0.0
    bound = tol.bound(scale)
    return r < bound, r, bound


def _frame_pairs(conn: Connection):
    """Index pairs (i, j) with nonzero inverse metric entry, and that entry."""
    ginv = conn.alg.metric_inverse
    n = conn.alg.dim
    return [(i, j, ginv[i][j]) for i in range(n) for j in range(n) if ginv[i][j] != 0]


def nabla_v(conn: Connection, v: Sequence) -> list[Vector]:
    """``[nabla_{e_i} V for each basis vector e_i]``."""
    alg = conn.alg
    return [conn.nabla(alg.basis(i), v) for i in range(alg.dim)]


def rough_laplacian(conn: Connection, v: Sequence) -> Vector:
    """``sum_ij g^ij (nabla_i nabla_j V - nabla_{nabla_i e_j} V)``."""
    alg = conn.alg
    v = alg.check_vector(v)
    dv = nabla_v(conn, v)
    out = alg.zero()
    for i, j, gij in _frame_pairs(conn):
        first = conn.nabla(alg.basis(i), dv[j])
        second = conn.nabla(conn.gamma[i][j], v)
        out = tuple(o + gij * (a - b) for o, a, b in zip(out, first, second))
    return out


def laplacian_matrix(conn: Connection) -> list[list[Scalar]]:
    """Matrix of the (linear) rough Laplacian; column k is its value on e_k."""
    alg = conn.alg
    cols = [rough_laplacian(conn, alg.basis(k)) for k in range(alg.dim)]
    return [[cols[k][i] for k in range(alg.dim)] for i in range(alg.dim)]


@dataclass(frozen=True)
class CollinearityResult:
    kind: str
    lam: Scalar | None
    residual: float
    bound: float = 0.0

    @property
    def collinear(self) -> bool:
        return self.kind != NOT_COLLINEAR


def collinear_to(w: Sequence, v: Sequence, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> CollinearityResult:
    """Classify ``w`` against ``span(v)`` using the 2x2 minors of ``[w; v]``.

    ``lam`` is the Euclidean least-squares factor, which stays defined when
    ``v`` is null for the metric.
    """
    if all(x == 0 for x in v):
        raise ValueError("collinearity is undefined for the zero vector")
    n = len(v)
    exact = sc.all_exact(w) and sc.all_exact(v)
    if scale is None:
        scale = (1.0 + al.euclid_norm(w)) * (1.0 + al.euclid_norm(v))
    bound = 0.0 if exact else tol.bound(scale)
    wn = al.euclid_norm(w)
    if (exact and all(x == 0 for x in w)) or (not exact and wn < bound):
        zero = Fraction(0) if exact else 0.0
        return CollinearityResult(ZERO, zero, wn, bound)
    minors = [w[i] * v[j] - w[j] * v[i] for i in range(n) for j in range(i + 1, n)]
    residual = max(abs(float(m)) for m in minors)
    ok = all(m == 0 for m in minors) if exact else residual < bound
    if not ok:
        return CollinearityResult(NOT_COLLINEAR, None, residual, bound)
    lam = sum(a * b for a, b in zip(w, v)) / sum(b * b for b in v)
    return CollinearityResult(EIGEN, lam, residual, bound)


def collinearity_test(conn: Connection, v: Sequence, tol: Tolerance = DEFAULT_TOL) -> CollinearityResult:
    """Is ``rough_laplacian(V)`` collinear to ``V``? (criticality among fields of fixed length)"""
    lv = rough_laplacian(conn, v)
    return collinear_to(lv, v, tol, (1.0 + al.euclid_norm(lv)) * (1.0 + al.euclid_norm(v)))


def curvature_trace(conn: Connection, v: Sequence) -> Vector:
    """``sum_ij g^ij R(nabla_{e_i} V, V) e_j``."""
    alg = conn.alg
    v = alg.check_vector(v)
    dv = nabla_v(conn, v)
    out = alg.zero()
    for i, j, gij in _frame_pairs(conn):
        r = al.curvature(conn, dv[i], v, alg.basis(j))
        out = tuple(o + gij * x for o, x in zip(out, r))
    return out


@dataclass(frozen=True)
class Check:
    """Outcome of a yes/no test with the residual it was decided on."""

    ok: bool
    residual: float
    bound: float = 0.0
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def is_harmonic_section(conn: Connection, v: Sequence, tol: Tolerance = DEFAULT_TOL) -> Check:
    return Check(*_vanishes(rough_laplacian(conn, v), tol, _scale(conn, v, 2)))


def defines_harmonic_map(conn: Connection, v: Sequence, tol: Tolerance = DEFAULT_TOL) -> Check:
    """Both the curvature trace and the rough Laplacian must vanish."""
    ok_l, r_l, b_l = _vanishes(rough_laplacian(conn, v), tol, _scale(conn, v, 2))
    ok_c, r_c, b_c = _vanishes(curvature_trace(conn, v), tol, _scale(conn, v, 3, 2))
    # report the test that is closest to its own threshold
    worst = max(((r_l, b_l), (r_c, b_c)), key=lambda rb: rb[0] / rb[1] if rb[1] else (rb[0] > 0) * 1e300)
    return Check(ok_l and ok_c, worst[0], worst[1], {"laplacian": r_l, "curvature_trace": r_c})


def is_geodesic(conn: Connection, v: Sequence, tol: Tolerance = DEFAULT_TOL) -> Check:
    return Check(*_vanishes(conn.nabla(v, v), tol, _scale(conn, v, 1, 2)))


def killing_defect(alg: al.MetricLieAlgebra, v: Sequence) -> list[Scalar]:
    """``g([V,e_i],e_j) + g(e_i,[V,e_j])`` for i <= j, i.e. ``-(L_V g)(e_i, e_j)``."""
    v = alg.check_vector(v)
    e = [alg.basis(i) for i in range(alg.dim)]
    ad = [al.bracket(alg, v, ei) for ei in e]
    return [
        al.inner(alg, ad[i], e[j]) + al.inner(alg, e[i], ad[j]) for i in range(alg.dim) for j in range(i, alg.dim)
    ]


def is_killing(alg: al.MetricLieAlgebra, v: Sequence, tol: Tolerance = DEFAULT_TOL) -> Check:
    d = killing_defect(alg, v)
    worst = max(abs(float(x)) for x in d)
    if sc.all_exact(d):
        return Check(all(x == 0 for x in d), worst)
    gmax = max(abs(float(x)) for row in alg.metric for x in row)
    bound = tol.bound((1 + alg.magnitude) * (1 + gmax) * (1 + al.euclid_norm(v)))
    return Check(worst < bound, worst, bound)


def is_parallel(conn: Connection, v: Sequence, tol: Tolerance = DEFAULT_TOL) -> Check:
    comps = [x for dv in nabla_v(conn, v) for x in dv]
    worst = max(abs(float(x)) for x in comps)
    if sc.all_exact(comps):
        return Check(all(x == 0 for x in comps), worst)
    bound = tol.bound(_scale(conn, v, 1))
    return Check(worst < bound, worst, bound)


def divergence(conn: Connection, v: Sequence) -> Scalar:
    """``sum_ij g^ij g(nabla_{e_i} V, e_j)``, which is the trace of ``W -> nabla_W V``."""
    dv = nabla_v(conn, v)
    return sum(dv[i][i] for i in range(conn.alg.dim))


def nabla_v_adjoint(conn: Connection, v: Sequence, x: Sequence) -> Vector:
    """``(nabla V)^t X`` defined by ``g((nabla V)^t X, Y) = g(X, nabla_Y V)``."""
    alg = conn.alg
    dv = nabla_v(conn, v)
    n, ginv = alg.dim, alg.metric_inverse
    # covector Y -> g(X, nabla_Y V), raised with g^{-1}
    low = [al.inner(alg, x, dv[k]) for k in range(n)]
    return tuple(sum(ginv[i][k] * low[k] for k in range(n)) for i in range(n))


def spatial_tension(conn: Connection, v: Sequence) -> Vector:
    """``-lap V - nabla_V nabla_V V - div V * nabla_V V + (nabla V)^t nabla_V V``."""
    v = conn.alg.check_vector(v)
    lv = rough_laplacian(conn, v)
    nvv = conn.nabla(v, v)
    term2 = conn.nabla(v, nvv)
    div = divergence(conn, v)
    term4 = nabla_v_adjoint(conn, v, nvv)
    return tuple(-a - b - div * c + d for a, b, c, d in zip(lv, term2, nvv, term4))


def is_spatially_harmonic(conn: Connection, v: Sequence, tol: Tolerance = DEFAULT_TOL) -> CollinearityResult:
    x = spatial_tension(conn, v)
    return collinear_to(x, v, tol, (1.0 + al.euclid_norm(x)) * (1.0 + al.euclid_norm(v)))


def gradient_norm_squared(conn: Connection, v: Sequence) -> Scalar:
    """``||nabla V||^2 = sum_ij g^ij g(nabla_{e_i} V, nabla_{e_j} V)``."""
    dv = nabla_v(conn, v)
    return sum(gij * al.inner(conn.alg, dv[i], dv[j]) for i, j, gij in _frame_pairs(conn))


def energy_density(conn: Connection, v: Sequence) -> Scalar:
    """Energy per unit volume, ``dim/2 + ||nabla V||^2 / 2``."""
    half = Fraction(1, 2) if conn.alg.exact else 0.5
    return conn.alg.dim * half + half * gradient_norm_squared(conn, v)


@dataclass
class ClassificationReport:
    vector: tuple
    norm_squared: Scalar
    energy_density: Scalar
    harmonic_section: Check
    defines_harmonic_map: Check
    geodesic: Check
    killing: Check
    parallel: Check
    critical: CollinearityResult | None
    spatial: CollinearityResult | None
    inconsistencies: list[str] = field(default_factory=list)

    @property
    def critical_point(self) -> bool | None:
        return None if self.critical is None else self.critical.collinear

    @property
    def spatially_harmonic(self) -> bool | None:
        return None if self.spatial is None else self.spatial.collinear

    def flags(self) -> dict:
        return {
            "harmonic_section": self.harmonic_section.ok,
            "critical_point": self.critical_point,
            "defines_harmonic_map": self.defines_harmonic_map.ok,
            "geodesic": self.geodesic.ok,
            "killing": self.killing.ok,
            "parallel": self.parallel.ok,
            "spatially_harmonic": self.spatially_harmonic,
        }

    def to_dict(self) -> dict:
        out = {
            "vector": [sc.to_json_value(x) for x in self.vector],
            "norm_squared": sc.to_json_value(self.norm_squared),
            "energy_density": sc.to_json_value(self.energy_density),
            "flags": self.flags(),
            "residuals": {
                "laplacian": self.harmonic_section.residual,
                "harmonic_map": self.defines_harmonic_map.residual,
                "geodesic": self.geodesic.residual,
                "killing": self.killing.residual,
                "parallel": self.parallel.residual,
            },
            "inconsistencies": list(self.inconsistencies),
        }
        if self.critical is not None:
            out["critical"] = {
                "kind": self.critical.kind,
                "lambda": None if self.critical.lam is None else sc.to_json_value(self.critical.lam),
                "residual": self.critical.residual,
            }
        if self.spatial is not None:
            out["spatial"] = {"kind": self.spatial.kind, "residual": self.spatial.residual}
        return out


def classify(conn: Connection, v: Sequence, tol: Tolerance = DEFAULT_TOL) -> ClassificationReport:
    """Run every test on ``V`` and cross-check the implications between them."""
    alg = conn.alg
    v = alg.check_vector(v)
    nonzero = any(x != 0 for x in v)
    rep = ClassificationReport(
        vector=v,
        norm_squared=al.norm_squared(alg, v),
        energy_density=energy_density(conn, v),
        harmonic_section=is_harmonic_section(conn, v, tol),
        defines_harmonic_map=defines_harmonic_map(conn, v, tol),
        geodesic=is_geodesic(conn, v, tol),
        killing=is_killing(alg, v, tol),
        parallel=is_parallel(conn, v, tol),
        critical=collinearity_test(conn, v, tol) if nonzero else None,
        spatial=is_spatially_harmonic(conn, v, tol) if nonzero else None,
    )
    rep.inconsistencies = implication_failures(rep)
    return rep


def implication_failures(rep: ClassificationReport) -> list[str]:
    out = []
    f = rep.flags()
    if f["parallel"]:
        for name in ("geodesic", "killing", "harmonic_section", "defines_harmonic_map"):
            if not f[name]:
                out.append(f"parallel but not {name}")
        for name in ("critical_point", "spatially_harmonic"):
            if f[name] is False:
                out.append(f"parallel but not {name}")
    if f["defines_harmonic_map"] and not f["harmonic_section"]:
        out.append("defines a harmonic map but is not a harmonic section")
    if f["harmonic_section"] and f["critical_point"] is False:
        out.append("harmonic section but not critical")
    if f["geodesic"] and f["critical_point"] is not None and f["critical_point"] != f["spatially_harmonic"]:
        out.append("geodesic but criticality and spatial harmonicity disagree")
    return out
