"""The sixteen four-dimensional Lorentzian Einstein Lie algebras and the
statements made about their invariant vector fields.

Cases are stored declaratively: every structure constant is an expression
string over the parameters ``A..F``, ``eps`` and ``del``, evaluated by
:mod:`harmonic_lie.expr`. Exact parameters give exact algebras whenever all
square roots are rational.

Cases 1-11 use the metric ``diag(1, 1, -1, 1)``. Cases 12-16 are defined in a
null basis with ``g(X3, X4) = 1``; their statements use the pseudo-orthonormal
frame ``e3 = -X3/2 + X4, e4 = X3/2 + X4``, available through
:func:`frame_change` and :func:`claim_frame_algebra`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import algebra as al
from . import expr
from . import scalar as sc

METRIC_A = (("1", "0", "0", "0"), ("0", "1", "0", "0"), ("0", "0", "-1", "0"), ("0", "0", "0", "1"))
METRIC_C = (("1", "0", "0", "0"), ("0", "1", "0", "0"), ("0", "0", "0", "1"), ("0", "0", "1", "0"))

# columns are e1..e4 written in X1..X4
FRAME_C = (("1", "0", "0", "0"), ("0", "1", "0", "0"), ("0", "0", "-1/2", "1/2"), ("0", "0", "1", "1"))

CASE_IDS = tuple(range(1, 17))
SIGNS = ("eps", "del")


class InadmissibleParams(ValueError):
    """Parameters outside the admissible region of a case; the message names the constraint."""


@dataclass(frozen=True)
class CaseDef:
    case_id: int
    family_type: str
    params: tuple[str, ...]
    brackets: Mapping[tuple[int, int], tuple[str, ...]]  # 1-based pairs
    metric: tuple
    radicands: tuple[str, ...] = ()
    denominators: tuple[str, ...] = ()
    printed: Mapping[tuple[int, int], tuple[str, ...]] | None = None  # as typeset, when it differs

    @property
    def null_basis(self) -> bool:
        return self.metric is METRIC_C


def _d(case_id, family_type, params, brackets, metric=METRIC_A, **kw):
    return CaseDef(case_id, family_type, tuple(params.split()), brackets, metric, **kw)


_R24 = "sqrt(A**2-B**2)"
_R5 = "sqrt(A**2+A*B+B**2)"
_R10 = "sqrt(B**2-A**2-C**2-A*C)"
_R14 = "sqrt((A+D)**2+4*B**2)"

CASES: dict[int, CaseDef] = {
    c.case_id: c
    for c in [
        _d(1, "a1", "A eps del", {
            (1, 2): ("eps*A", "0", "0", "0"),
            (1, 3): ("A", "0", "0", "0"),
            (1, 4): ("del*A", "0", "0", "0"),
            (3, 4): ("0", "-2*A*del*eps", "2*A*del", "0"),
        }),
        _d(2, "a1", "A B eps del", {
            (1, 2): (f"eps*{_R24}/2", "0", "0", "0"),
            (1, 3): (f"-eps*del*{_R24}/2", "0", "0", "0"),
            (1, 4): ("(del*A+B)/2", "0", "0", "0"),
            (2, 4): ("0", "B", "B*del", "0"),
            (3, 4): ("0", "A", "A*del", "0"),
        }, radicands=("A**2-B**2",)),
        _d(3, "a1", "A B eps", {
            (1, 2): (f"eps*A*{_R24}/B", "0", "0", "0"),
            (1, 3): (f"eps*{_R24}", "0", "0", "0"),
            (2, 4): ("0", "B", "-A", "0"),
            (3, 4): ("0", "A", "-A**2/B", "0"),
        }, radicands=("A**2-B**2",), denominators=("B",)),
        _d(4, "a1", "A B eps", {
            (1, 2): (f"eps*{_R24}", "B", "0", "0"),
            (3, 4): ("0", "0", "A", "0"),
        }, radicands=("A**2-B**2",)),
        _d(5, "a2", "A B eps", {
            (1, 4): ("-(A+B)", "0", "0", "0"),
            (2, 4): ("0", "B", f"-eps*{_R5}", "0"),
            (3, 4): ("0", f"eps*{_R5}", "A", "0"),
        }, radicands=("A**2+A*B+B**2",)),
        _d(6, "a2", "A eps", {
            (1, 4): ("-2*A", "0", "0", "0"),
            (2, 4): ("0", "-5*A", "6*eps*A", "0"),
            (3, 4): ("0", "0", "A", "0"),
        }),
        _d(7, "a2", "A B", {
            (1, 4): ("A", "0", "0", "0"),
            (2, 4): ("0", "A", "B", "0"),
            (3, 4): ("0", "B", "A", "0"),
        }),
        _d(8, "a2", "A B eps", {
            (1, 4): ("eps*(A+B)/3", "0", "0", "0"),
            (2, 4): ("0", "eps*(5*B-A)/6", "B", "0"),
            (3, 4): ("0", "A", "eps*(5*A-B)/6", "0"),
        }),
        _d(9, "a2", "A eps", {
            (1, 4): ("5*A/2", "0", "3*eps*A", "0"),
            (2, 4): ("0", "A", "0", "0"),
            (3, 4): ("0", "0", "-A/2", "0"),
        }),
        _d(10, "a2", "A B C eps", {
            (1, 4): ("A", f"eps*{_R10}", "0", "0"),
            (2, 4): (f"eps*{_R10}", "-(A+C)", "-B", "0"),
            (3, 4): ("0", "B", "C", "0"),
        }, radicands=("B**2-A**2-C**2-A*C",)),
        _d(11, "a2", "A eps del", {
            (1, 4): ("-2*eps*sqrt(2)*A/3", "0", "del*A", "0"),
            (2, 4): ("0", "eps*sqrt(2)*A/3", "0", "0"),
            (3, 4): ("0", "A", "-eps*sqrt(2)*A/6", "0"),
        }),
        # As typeset, [e2,e4] starts with B*e1, which is not Einstein; A*e1 is.
        _d(12, "c1", "A B C D E eps", {
            (1, 2): ("0", "0", "eps*(A+B)", "0"),
            (1, 4): ("C", "B", "D", "0"),
            (2, 4): ("A", "0", "E", "0"),
            (3, 4): ("0", "0", "C", "0"),
        }, metric=METRIC_C, printed={
            (1, 2): ("0", "0", "eps*(A+B)", "0"),
            (1, 4): ("C", "B", "D", "0"),
            (2, 4): ("B", "0", "E", "0"),
            (3, 4): ("0", "0", "C", "0"),
        }),
        _d(13, "c1", "A B C D E F", {
            (1, 2): ("0", "0", "B", "0"),
            (1, 4): ("((C+D)**2-B**2)/(4*A)", "D", "F", "0"),
            (2, 4): ("C", "A", "E", "0"),
            (3, 4): ("0", "0", "((C+D)**2-B**2+4*A**2)/(4*A)", "0"),
        }, metric=METRIC_C, denominators=("A",)),
        _d(14, "c1", "A B C D E eps", {
            (1, 2): ("0", "0", f"eps*{_R14}", "0"),
            (1, 4): ("-B", "D", "E", "0"),
            (2, 4): ("A", "B", "C", "0"),
        }, metric=METRIC_C, radicands=("(A+D)**2+4*B**2",)),
        # As typeset, A*e2+B*e3 is attached to [e1,e2], which violates Jacobi.
        _d(15, "c2", "A B C", {
            (1, 4): ("0", "A", "B", "0"),
            (2, 4): ("-A", "0", "C", "0"),
        }, metric=METRIC_C, printed={
            (1, 2): ("0", "A", "B", "0"),
            (2, 4): ("-A", "0", "C", "0"),
        }),
        _d(16, "c2", "A B C D E F", {
            (1, 4): ("A", "B", "C", "0"),
            (2, 4): ("D", "E", "F", "0"),
            (3, 4): ("0", "0", "((B+D)**2+2*(A**2+E**2))/(2*(E+A))", "0"),
        }, metric=METRIC_C, denominators=("E+A",)),
    ]
}


def case_def(case_id: int) -> CaseDef:
    try:
        return CASES[int(case_id)]
    except (KeyError, ValueError):
        raise InadmissibleParams(f"unknown case {case_id!r}; expected 1..16") from None


# -- parameters ---------------------------------------------------------------


@dataclass(frozen=True)
class CaseParams:
    case_id: int
    values: tuple[tuple[str, sc.Scalar], ...]
    label: str = ""

    @classmethod
    def make(cls, case_id: int, values: Mapping[str, object] | None = None, label: str = "", exact: bool = True, **kw):
        merged = dict(values or {}, **kw)
        out = {}
        for k, v in merged.items():
            if k in SIGNS:
                out[k] = int(sc.to_scalar(v, True))
            else:
                out[k] = sc.to_scalar(v, exact)
        order = case_def(case_id).params
        return cls(int(case_id), tuple(sorted(out.items(), key=lambda kv: _order(order, kv[0]))), label)

    def __getitem__(self, key):
        return dict(self.values)[key]

    def get(self, key, default=None):
        return dict(self.values).get(key, default)

    def env(self) -> dict:
        return dict(self.values)

    @property
    def exact(self) -> bool:
        return sc.all_exact(v for _, v in self.values)

    def as_float(self) -> "CaseParams":
        return CaseParams(self.case_id, tuple((k, v if k in SIGNS else float(v)) for k, v in self.values), self.label)

    def to_json(self) -> dict:
        return {k: sc.to_json_value(v) for k, v in self.values}

    def __str__(self):
        return ",".join(f"{k}={sc.fmt(v)}" for k, v in self.values)


def _order(order, key):
    return order.index(key) if key in order else len(order)


def parse_params(case_id: int, text: str, exact: bool = True) -> CaseParams:
    """``"A=5,B=3,eps=1"`` (``p/q`` allowed) into :class:`CaseParams`."""
    values = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep or not key.strip() or not val.strip():
            raise InadmissibleParams(f"malformed parameter {item!r}; expected key=value")
        try:
            values[key.strip()] = sc.to_scalar(val.strip(), exact)
        except (ValueError, ZeroDivisionError):
            raise InadmissibleParams(f"malformed value in {item!r}") from None
    return CaseParams.make(case_id, values, exact=exact)


def constraints(case_id: int) -> list[str]:
    d = case_def(case_id)
    out = [f"{r} >= 0" for r in d.radicands] + [f"{q} != 0" for q in d.denominators]
    out += [f"{s} in {{-1, 1}}" for s in SIGNS if s in d.params]
    return out


def check_admissible(params: CaseParams, radicand_margin: float = 0.0, denominator_margin: float = 0.0) -> None:
    """Raise :class:`InadmissibleParams` naming the first violated constraint."""
    d = case_def(params.case_id)
    env = params.env()
    missing = [p for p in d.params if p not in env]
    if missing:
        raise InadmissibleParams(f"case {d.case_id} needs parameter(s) {', '.join(missing)}")
    extra = sorted(set(env) - set(d.params))
    if extra:
        raise InadmissibleParams(f"case {d.case_id} has no parameter(s) {', '.join(extra)}")
    for s in SIGNS:
        if s in env and env[s] not in (1, -1):
            raise InadmissibleParams(f"{s} in {{-1, 1}} violated ({s}={env[s]})")
    for r in d.radicands:
        value = expr.evaluate(r, env)
        if value < radicand_margin:
            bound = "0" if radicand_margin == 0 else f"{radicand_margin}"
            raise InadmissibleParams(f"{r} >= {bound} violated (value {sc.fmt(value)})")
    for q in d.denominators:
        value = expr.evaluate(q, env)
        if value == 0 or abs(value) < denominator_margin:
            raise InadmissibleParams(f"{q} != 0 violated (value {sc.fmt(value)})")


def is_admissible(params: CaseParams, **margins) -> bool:
    try:
        check_admissible(params, **margins)
    except InadmissibleParams:
        return False
    return True


# -- construction -------------------------------------------------------------


def _matrix(rows, env=None):
    return [[expr.evaluate(x, env or {}) for x in row] for row in rows]


def build_case(params: CaseParams, printed: bool = False) -> al.MetricLieAlgebra:
    """The algebra of ``params.case_id`` in the basis the brackets are written in.

    ``printed=True`` uses the bracket table exactly as typeset for the two
    cases where that differs from the Einstein algebra.
    """
    check_admissible(params)
    d = case_def(params.case_id)
    table = d.printed if printed and d.printed else d.brackets
    env = params.env()
    if not params.exact:
        env = {k: (v if k in SIGNS else float(v)) for k, v in env.items()}
    rows = {(i - 1, j - 1): [expr.evaluate(x, env) for x in coeffs] for (i, j), coeffs in table.items()}
    metric = _matrix(d.metric)
    flat = [x for r in rows.values() for x in r]
    if not sc.all_exact(flat):
        rows = {k: [float(x) for x in r] for k, r in rows.items()}
        metric = [[float(x) for x in r] for r in metric]
    label = f"case {d.case_id}" + (" (as printed)" if printed and d.printed else "")
    return al.MetricLieAlgebra.from_brackets(rows, metric, label)


def frame_change(case_id: int, exact: bool = True):
    """Basis change to the pseudo-orthonormal claim frame, or ``None`` if already there."""
    if not case_def(case_id).null_basis:
        return None
    m = _matrix(FRAME_C)
    return m if exact else [[float(x) for x in r] for r in m]


def claim_frame_algebra(params: CaseParams, printed: bool = False) -> al.MetricLieAlgebra:
    """The algebra in the frame where every statement about the case is phrased."""
    alg = build_case(params, printed)
    p = frame_change(params.case_id, alg.exact)
    if p is None:
        return alg
    return al.change_basis(alg, p, alg.label + " (orthonormal frame)")


# -- witnesses and random draws -------------------------------------------------


def _w(case_id, label="", **values):
    return CaseParams.make(case_id, values, label=label)


_WITNESSES: dict[int, list[CaseParams]] = {
    1: [_w(1, "generic", A=1, eps=1, **{"del": 1}), _w(1, "generic", A=2, eps=1, **{"del": -1}),
        _w(1, "generic", A=1, eps=-1, **{"del": 1})],
    2: [_w(2, "generic", A=5, B=3, eps=-1, **{"del": 1}), _w(2, "A=-B", A=1, B=-1, eps=-1, **{"del": 1}),
        _w(2, "generic", A=5, B=-4, eps=1, **{"del": -1})],
    3: [_w(3, "generic", A=5, B=3, eps=1), _w(3, "A=B", A=1, B=1, eps=1), _w(3, "A=-B", A=2, B=-2, eps=-1)],
    4: [_w(4, "generic", A=5, B=3, eps=1), _w(4, "A=B", A=1, B=1, eps=1), _w(4, "A=-B", A=2, B=-2, eps=-1)],
    5: [_w(5, "generic", A=3, B=5, eps=1), _w(5, "A=-B", A=1, B=-1, eps=1), _w(5, "generic", A=5, B=3, eps=-1)],
    6: [_w(6, "generic", A=1, eps=1), _w(6, "generic", A=2, eps=-1)],
    7: [_w(7, "generic", A=1, B=10), _w(7, "A=-B", A=1, B=-1), _w(7, "generic", A=2, B=1)],
    8: [_w(8, "generic", A=1, B=2, eps=-1), _w(8, "A=-B", A=1, B=-1, eps=-1), _w(8, "generic", A=1, B=2, eps=1)],
    9: [_w(9, "generic", A=1, eps=1), _w(9, "generic", A=2, eps=-1)],
    10: [_w(10, "generic", A=1, B=2, C=1, eps=1), _w(10, "C=0", A=3, B=5, C=0, eps=1),
         _w(10, "B=0", A=0, B=0, C=0, eps=1)],
    # sqrt(2)*A is irrational for every rational A != 0, so this one is float-valued
    11: [_w(11, "generic", A=1, eps=-1, **{"del": -1}), _w(11, "generic", A=2, eps=1, **{"del": 1})],
    12: [_w(12, "generic", A=1, B=2, C=1, D=1, E=1, eps=1), _w(12, "C=0", A=1, B=0, C=0, D=0, E=0, eps=1),
         _w(12, "generic", A=2, B=-1, C=3, D=-2, E=1, eps=-1)],
    13: [_w(13, "generic", A=1, B=1, C=1, D=1, E=0, F=0), _w(13, "4A^2=B^2-(C+D)^2", A=1, B=2, C=0, D=0, E=0, F=0),
         _w(13, "generic", A=2, B=1, C=-1, D=3, E=1, F=2)],
    14: [_w(14, "generic", A=1, B=0, C=0, D=1, E=0, eps=1), _w(14, "generic", A=1, B=2, C=1, D=2, E=1, eps=-1)],
    15: [_w(15, "generic", A=1, B=1, C=1), _w(15, "generic", A=2, B=-1, C=3)],
    16: [_w(16, "generic", A=1, B=0, C=0, D=0, E=1, F=0), _w(16, "generic", A=1, B=1, C=1, D=1, E=1, F=1)],
}


def rational_witnesses(case_id: int) -> list[CaseParams]:
    """Parameter sets with rational parameters, chosen so that square roots
    come out rational (except case 11, where that is impossible). The first
    entry of each list satisfies every constraint strictly."""
    return list(_WITNESSES[case_def(case_id).case_id])


def threshold_witnesses(case_id: int) -> list[CaseParams]:
    """Float parameter sets sitting on thresholds that no rational point reaches."""
    if case_id == 7:
        s13 = 13 ** 0.5
        return [CaseParams.make(7, {"A": (-3 + s13) / 2, "B": 1.0}, label="A^2+3AB-B^2=0", exact=False),
                CaseParams.make(7, {"A": (3 - s13) / 2, "B": 1.0}, label="B^2-A^2+3AB=0", exact=False)]
    return []


def random_params(case_id: int, rng, fixed: Mapping[str, object] | None = None, span: float = 2.0,
                  radicand_margin: float = 0.01, denominator_margin: float = 0.1,
                  max_tries: int = 10000) -> CaseParams:
    """Uniform draw on ``[-span, span]`` per parameter, rejected until strictly admissible.

    ``rng`` is a :class:`numpy.random.Generator`; ``fixed`` pins chosen values.
    """
    d = case_def(case_id)
    fixed = dict(fixed or {})
    for _ in range(max_tries):
        values = {}
        for p in d.params:
            if p in fixed:
                values[p] = fixed[p]
            elif p in SIGNS:
                values[p] = int(rng.choice((-1, 1)))
            else:
                values[p] = float(rng.uniform(-span, span))
        params = CaseParams.make(case_id, values, label="random", exact=False)
        if is_admissible(params, radicand_margin=radicand_margin, denominator_margin=denominator_margin):
            return params
    raise InadmissibleParams(f"no admissible draw for case {case_id} with {fixed}")


# -- claims -------------------------------------------------------------------

CRITICAL = "critical_family"
EIGENVALUE = "eigenvalue"
HARMONIC_MAP = "harmonic_map_threshold"
HARMONIC_SECTION = "harmonic_section_condition"
GEODESIC = "geodesic_family"
KILLING = "killing_condition"
PARALLEL = "parallel_family"
ENERGY = "energy_formula"
SPATIAL = "spatially_harmonic_condition"
CLAIM_KINDS = (CRITICAL, EIGENVALUE, HARMONIC_MAP, HARMONIC_SECTION, GEODESIC, KILLING, PARALLEL, ENERGY, SPATIAL)
VALUE_KINDS = (EIGENVALUE, ENERGY)

Family = tuple  # of generator tuples of expression strings


@dataclass(frozen=True)
class Branch:
    """One way for a property to hold: a parameter expression that must vanish
    (``None`` = no condition) and a subspace V must lie in (``None`` = any V)."""

    condition: str | None = None
    family: Family | None = None


@dataclass(frozen=True)
class Variant:
    """One reading of a claim.

    Boolean kinds: on ``domain`` the property holds exactly when some branch
    is satisfied; ``branches=None`` means it always holds there and ``()``
    means it never does. Value kinds compare against ``expected``.
    """

    label: str
    domain: Family | None = None
    branches: tuple[Branch, ...] | None = None
    expected: str | None = None


@dataclass(frozen=True)
class ClaimRecord:
    case_id: int
    kind: str
    source: str
    variants: tuple[Variant, ...]
    requires: tuple[tuple[str, object], ...] = ()
    note: str = ""

    def __post_init__(self):
        if self.kind not in CLAIM_KINDS:
            raise ValueError(f"unknown claim kind {self.kind!r}")
        if not self.variants:
            raise ValueError("a claim needs at least one variant")

    @property
    def status(self) -> str:
        return "conflicting" if len(self.variants) > 1 else "asserted"

    @property
    def family(self) -> Family | None:
        """Generators of the subspace the primary reading is about."""
        v = self.variants[0]
        if self.kind in VALUE_KINDS or v.branches is None or not v.branches:
            return v.domain
        fams = [b.family for b in v.branches if b.family is not None]
        return fams[0] if len(fams) == 1 and len(v.branches) == 1 else v.domain

    @property
    def expected(self) -> str | None:
        v = self.variants[0]
        if v.expected is not None:
            return v.expected
        if v.branches is None:
            return "always"
        if not v.branches:
            return "never"
        return " or ".join(_branch_text(b) for b in v.branches)

    def applies_to(self, params: CaseParams) -> bool:
        env = params.env()
        return params.case_id == self.case_id and all(env.get(k) == v for k, v in self.requires)

    def to_json(self) -> dict:
        return {
            "case": self.case_id,
            "kind": self.kind,
            "family": _family_json(self.family),
            "expected": self.expected,
            "status": self.status,
            "source": self.source,
            "requires": {k: v for k, v in self.requires},
            "variants": [
                {
                    "label": v.label,
                    "domain": _family_json(v.domain),
                    "branches": None if v.branches is None else [
                        {"condition": b.condition, "family": _family_json(b.family)} for b in v.branches
                    ],
                    "expected": v.expected,
                }
                for v in self.variants
            ],
            **({"note": self.note} if self.note else {}),
        }


def _family_json(fam):
    return None if fam is None else [list(g) for g in fam]


def _branch_text(b: Branch) -> str:
    parts = []
    if b.condition is not None:
        parts.append(f"{b.condition} = 0")
    if b.family is not None:
        parts.append("V in span" + str([list(g) for g in b.family]).replace("'", ""))
    return " and ".join(parts) or "always"


def evaluate_family(fam: Family | None, env: Mapping[str, sc.Scalar]) -> list[tuple] | None:
    if fam is None:
        return None
    return [tuple(expr.evaluate(x, env) for x in g) for g in fam]


# frame coordinates (a, b, c, d)
E1, E2, E3, E4 = (("1", "0", "0", "0"), ("0", "1", "0", "0"), ("0", "0", "1", "0"), ("0", "0", "0", "1"))
U = ("0", "0", "1", "-1")
NULL_PLANE = (E1, E2, U)  # a e1 + b e2 + c u

CRIT_SRC = "critical-set classification"
MAP_SRC = "harmonic-map classification"
EQ_SRC = "equivalence table"
GKP_SRC = "geodesic/Killing/parallel table"
SPATIAL_SRC = "spatial harmonicity remark"
ENERGY_SRC = "energy table"
MIN_SRC = "minimum-energy statement"
DERIV_SRC = "worked derivation"


def _one(case, kind, source, *, domain=None, branches=None, expected=None, requires=(), note=""):
    return ClaimRecord(case, kind, source, (Variant(source, domain, branches, expected),), tuple(requires), note)


def _iff(fam):
    return (Branch(None, fam),)


def _when(cond):
    return (Branch(cond, None),)


NEVER: tuple = ()


def _a_type_claims() -> list[ClaimRecord]:
    F1, F2 = (("0", "1", "-1", "-1"),), (("0", "1", "1", "-1"),)
    F4, F5 = (E1, E2), (E1,)
    F6 = F8 = (("0", "1", "-1", "0"),)
    F7, F9, F10 = (("0", "1", "1", "0"),), (("1", "0", "1", "0"),), (E3,)
    F11 = (("sqrt(2)", "-2*sqrt(2)/3", "1", "0"),)
    r1 = (("eps", 1),)
    r2 = (("eps", -1), ("del", 1))
    r11 = (("eps", -1), ("del", -1))
    both = f"{CRIT_SRC}; {EQ_SRC}"
    maps = f"{MAP_SRC}; {EQ_SRC}"
    c = []

    # 1
    c += [
        _one(1, CRITICAL, both, branches=_iff(F1), requires=r1),
        _one(1, EIGENVALUE, CRIT_SRC, domain=F1, expected="3*A**2", requires=r1),
        _one(1, GEODESIC, EQ_SRC, branches=_iff(F1), requires=r1),
        _one(1, HARMONIC_SECTION, EQ_SRC, domain=F1, branches=NEVER, requires=r1),
        _one(1, HARMONIC_MAP, EQ_SRC, domain=F1, branches=NEVER, requires=r1),
        _one(1, SPATIAL, SPATIAL_SRC, domain=F1, requires=r1),
        _one(1, ENERGY, ENERGY_SRC, expected="2+A**2*(nV+2*(d**2-b**2)+2*del*d*(b+c)-2*b*c)/2"),
        ClaimRecord(1, ENERGY, MIN_SRC, (
            Variant(MIN_SRC, F1, expected="2-3*A**2*c**2/2"),
            Variant(f"{ENERGY_SRC} restricted to the family", F1, expected="2+3*A**2*c**2/2"),
        ), r1),
    ]
    # 2
    c += [
        _one(2, CRITICAL, both, branches=_iff(F2), requires=r2),
        _one(2, EIGENVALUE, CRIT_SRC, domain=F2, expected="-3*(A+B)**2/4", requires=r2),
        _one(2, GEODESIC, EQ_SRC, branches=_iff(F2), requires=r2),
        _one(2, HARMONIC_SECTION, EQ_SRC, domain=F2, branches=_when("A+B"), requires=r2),
        _one(2, HARMONIC_MAP, maps, domain=F2, branches=_when("A+B"), requires=r2),
        _one(2, KILLING, EQ_SRC, branches=(Branch("A+B", (E1, E2, E3)),), requires=r2),
        _one(2, SPATIAL, SPATIAL_SRC, domain=F2, requires=r2),
        _one(2, ENERGY, ENERGY_SRC,
             expected="2+(A+B)**2*((a**2+3*d**2)*(A+B)+(B-A)*(b-c)**2-2*d*(b-c)*sqrt(A**2-B**2))/8"),
        ClaimRecord(2, ENERGY, MIN_SRC, (
            Variant(MIN_SRC, F2, expected="2+3*(A+B)**2*c**2/8"),
            Variant(f"{ENERGY_SRC} restricted to the family", F2, expected="2+3*(A+B)**3*c**2/8"),
        ), r2),
    ]
    # 3
    geo3 = (Branch("A-B", (E1, ("0", "1", "-1", "0"), E4)), Branch("A+B", (E1, ("0", "1", "1", "0"), E4)))
    c += [
        _one(3, CRITICAL, both),
        _one(3, EIGENVALUE, CRIT_SRC, expected="-(A**2-B**2)**2/B**2"),
        _one(3, GEODESIC, EQ_SRC, branches=geo3),
        _one(3, HARMONIC_SECTION, EQ_SRC, branches=_when("(A-B)*(A+B)")),
        _one(3, HARMONIC_MAP, maps, branches=_when("(A-B)*(A+B)")),
        _one(3, KILLING, EQ_SRC, branches=(Branch("A-B", (E1, ("0", "1", "-1", "0"))),
                                            Branch("A+B", (E1, ("0", "1", "1", "0"))))),
        _one(3, SPATIAL, SPATIAL_SRC, branches=geo3),
        _one(3, ENERGY, ENERGY_SRC, expected="2+(A-B)**2*(A+B)**2/(2*B**2)*nV"),
        ClaimRecord(3, ENERGY, MIN_SRC, (
            Variant(MIN_SRC, None, expected="2-(A**2-B**2)**2/(2*B**2)*nV"),
            Variant(ENERGY_SRC, None, expected="2+(A**2-B**2)**2/(2*B**2)*nV"),
        )),
    ]
    # 4
    c += [
        _one(4, CRITICAL, both, branches=_iff(F4)),
        _one(4, EIGENVALUE, CRIT_SRC, domain=F4, expected="B**2-A**2"),
        _one(4, GEODESIC, EQ_SRC, domain=F4, branches=_when("(A-B)*(A+B)")),
        _one(4, HARMONIC_SECTION, EQ_SRC, domain=F4, branches=_when("(A-B)*(A+B)")),
        _one(4, HARMONIC_MAP, maps, domain=F4, branches=_when("(A-B)*(A+B)")),
        _one(4, KILLING, EQ_SRC, domain=F4, branches=_when("(A-B)*(A+B)")),
        _one(4, PARALLEL, DERIV_SRC, branches=NEVER),
        _one(4, SPATIAL, SPATIAL_SRC, domain=F4, branches=_when("(A-B)*(A+B)")),
        _one(4, ENERGY, ENERGY_SRC, expected="2+(A**2*nV-B**2*(a**2+b**2))/2"),
        _one(4, ENERGY, MIN_SRC, domain=F4, expected="2+(A**2-B**2)/2*nV"),
    ]
    # 5
    c += [
        _one(5, CRITICAL, both, branches=_iff(F5)),
        _one(5, EIGENVALUE, CRIT_SRC, domain=F5, expected="-(A+B)**2"),
        _one(5, HARMONIC_SECTION, EQ_SRC, domain=F5, branches=_when("A+B")),
        _one(5, HARMONIC_MAP, maps, domain=F5, branches=_when("A+B")),
        _one(5, KILLING, EQ_SRC, branches=(Branch("A+B", F5),)),
        _one(5, ENERGY, ENERGY_SRC,
             expected="2+(A+B)*(A*(a**2-b**2)+2*eps*b*c*sqrt(A**2+A*B+B**2)+B*(a**2+c**2))/2"),
        _one(5, ENERGY, MIN_SRC, domain=F5, expected="2+(A+B)**2/2*nV"),
    ]
    # 6, 9: critical fields are geodesic, never harmonic, spatially harmonic
    for case, fam, lam, energy in (
        (6, F6, "-13*A**2", "2+A**2*(4*a**2+12*d**2+17*c**2+24*b*c+7*b**2)/2"),
        (9, F9, "-13*A**2/4", "2+A**2*(7*a**2/4+b**2+17*c**2/4+3*d**2-6*a*c)/2"),
    ):
        c += [
            _one(case, CRITICAL, both, branches=_iff(fam), requires=r1),
            _one(case, EIGENVALUE, CRIT_SRC, domain=fam, expected=lam, requires=r1),
            _one(case, GEODESIC, EQ_SRC, branches=_iff(fam), requires=r1),
            _one(case, HARMONIC_SECTION, EQ_SRC, domain=fam, branches=NEVER, requires=r1),
            _one(case, HARMONIC_MAP, EQ_SRC, domain=fam, branches=NEVER, requires=r1),
            _one(case, SPATIAL, SPATIAL_SRC, domain=fam, requires=r1),
            _one(case, ENERGY, ENERGY_SRC, expected=energy, requires=r1),
            _one(case, ENERGY, MIN_SRC, domain=fam, expected="2", requires=r1),
        ]
    # 7
    c += [
        _one(7, CRITICAL, f"{CRIT_SRC}; {EQ_SRC}; {DERIV_SRC}", branches=_iff(F7)),
        ClaimRecord(7, EIGENVALUE, CRIT_SRC, (
            Variant(CRIT_SRC, F7, expected="B**2-A**2+3*A*B"),
            Variant(DERIV_SRC, F7, expected="B**2-A**2-3*A*B"),
        )),
        _one(7, GEODESIC, EQ_SRC, branches=_iff(F7)),
        ClaimRecord(7, HARMONIC_SECTION, EQ_SRC, (
            Variant(EQ_SRC, F7, _when("A**2+3*A*B-B**2")),
            Variant(DERIV_SRC, F7, _when("A-(3-sqrt(13))/2*B")),
        )),
        _one(7, HARMONIC_MAP, maps, domain=F7, branches=_when("A**2+3*A*B-B**2")),
        _one(7, KILLING, EQ_SRC, domain=F7, branches=_when("A+B")),
        _one(7, PARALLEL, DERIV_SRC, branches=NEVER),
        _one(7, SPATIAL, SPATIAL_SRC, domain=F7),
        _one(7, ENERGY, ENERGY_SRC, expected="2+(A**2*(nV+2*d)-B**2*(b**2-c**2))/2"),
        _one(7, ENERGY, MIN_SRC, domain=F7, expected="2"),
    ]
    # 8
    r8 = (("eps", -1),)
    c += [
        _one(8, CRITICAL, both, branches=_iff(F8), requires=r8),
        _one(8, EIGENVALUE, CRIT_SRC, domain=F8, expected="13*(A+B)**2/36", requires=r8),
        _one(8, GEODESIC, EQ_SRC, branches=(Branch("A+B", (E1, ("0", "1", "-1", "0"), E4)),), requires=r8),
        _one(8, HARMONIC_SECTION, EQ_SRC, domain=F8, branches=_when("A+B"), requires=r8),
        _one(8, HARMONIC_MAP, maps, domain=F8, branches=_when("A+B"), requires=r8),
        _one(8, KILLING, EQ_SRC, branches=(Branch("A+B", (E1, E2, E3)),), requires=r8),
        _one(8, SPATIAL, SPATIAL_SRC, domain=F8, requires=r8),
        _one(8, ENERGY, ENERGY_SRC, requires=r8, expected=(
            "2+(A+B)*(A*(4*a**2-17*b**2-7*c**2+12*d**2-24*b*c)+B*(4*a**2+7*b**2+17*c**2+12*d**2+24*b*c))/72")),
        _one(8, ENERGY, MIN_SRC, domain=F8, expected="2", requires=r8),
    ]
    # 10
    row10 = "2-(A*C*(a**2-b**2)-C**2*(a**2+c**2)-2*eps*a*b*sqrt({})*C)/2"
    c += [
        _one(10, CRITICAL, both, branches=_iff(F10)),
        _one(10, EIGENVALUE, CRIT_SRC, domain=F10, expected="-C**2"),
        _one(10, GEODESIC, EQ_SRC, domain=F10, branches=_when("C")),
        _one(10, HARMONIC_SECTION, EQ_SRC, domain=F10, branches=_when("C")),
        ClaimRecord(10, HARMONIC_MAP, MAP_SRC, (
            Variant(MAP_SRC, F10, _when("B**2+C**2")),
            Variant(EQ_SRC, F10, _when("C")),
        )),
        _one(10, KILLING, EQ_SRC, domain=F10, branches=_when("C")),
        _one(10, SPATIAL, SPATIAL_SRC, domain=F10, branches=_when("C")),
        ClaimRecord(10, ENERGY, ENERGY_SRC, (
            Variant(f"{ENERGY_SRC} (B=0 remark)", None, expected=row10.format("-A**2-C**2-A*C")),
            Variant(f"{ENERGY_SRC} with the bracket radicand", None, expected=row10.format("B**2-A**2-C**2-A*C")),
        ), note="the table remarks B=0, but B=0 leaves only A=C=0 admissible"),
        _one(10, ENERGY, MIN_SRC, domain=F10, expected="2-C**2/2*nV",
             note="stated together with B=0, which the formula does not use"),
    ]
    # 11
    c += [
        _one(11, CRITICAL, both, branches=_iff(F11), requires=r11),
        _one(11, EIGENVALUE, CRIT_SRC, domain=F11, expected="5*A**2/18", requires=r11),
        _one(11, HARMONIC_SECTION, EQ_SRC, domain=F11, branches=NEVER, requires=r11),
        _one(11, HARMONIC_MAP, EQ_SRC, domain=F11, branches=NEVER, requires=r11),
        _one(11, ENERGY, ENERGY_SRC, requires=r11,
             expected="2+A**2*(3*a**2-b**2+17*c**2-5*d**2-10*a*b+9*sqrt(2)*a*c-9*sqrt(2)*b*c)/36"),
        ClaimRecord(11, ENERGY, MIN_SRC, (
            Variant(MIN_SRC, F11, expected="2-589*A**2*c**2/324"),
            Variant(f"{ENERGY_SRC} restricted to the family", F11, expected="2+589*A**2*c**2/324"),
        ), r11),
    ]
    return c


def _c_type_claims() -> list[ClaimRecord]:
    H = NULL_PLANE
    G13 = ("1", "-(B-C-D)/(2*A)", "0", "0")
    D16 = ("1", "-1", "0", "0")
    c = []
    geo = {12: (E2, U), 13: (G13, U), 14: (U,)}
    kil = {12: Branch("C", (U,)), 13: Branch("4*A**2-B**2+(C+D)**2", (U,)), 14: Branch(None, (U,))}
    energy = {
        12: "2+((A+B)**2+C**2)*(c+d)**2/2",
        13: "2+(B**2+4*A**2-2*C*B-2*B*D+(C+D)**2)*(B**2+4*A**2+2*C*B+2*B*D+(C+D)**2)*(c+d)**2/(32*A**2)",
        14: "2+((A+D)**2+4*B**2)*(c+d)**2/2",
    }
    for case in (12, 13, 14):
        c += [
            ClaimRecord(case, CRITICAL, CRIT_SRC, (
                Variant(CRIT_SRC, None, None),
                Variant(EQ_SRC, None, _iff(H)),
            )),
            _one(case, HARMONIC_MAP, f"{MAP_SRC}; {EQ_SRC}", branches=_iff(H)),
            _one(case, HARMONIC_SECTION, EQ_SRC, branches=_iff(H)),
            _one(case, GEODESIC, f"{GKP_SRC}; {EQ_SRC}", branches=_iff(geo[case])),
            _one(case, KILLING, f"{GKP_SRC}; {EQ_SRC}", branches=(kil[case],)),
            _one(case, PARALLEL, f"{GKP_SRC}; {EQ_SRC}", branches=(kil[case],)),
            _one(case, SPATIAL, SPATIAL_SRC, domain=H, branches=_iff(geo[case])),
            _one(case, ENERGY, ENERGY_SRC, expected=energy[case]),
            _one(case, ENERGY, MIN_SRC, domain=H, expected="2"),
        ]
    c += [
        _one(15, CRITICAL, f"{CRIT_SRC}; {EQ_SRC}"),
        _one(15, HARMONIC_MAP, f"{MAP_SRC}; {EQ_SRC}"),
        _one(15, HARMONIC_SECTION, f"{DERIV_SRC}; {EQ_SRC}"),
        _one(15, GEODESIC, f"{GKP_SRC}; {EQ_SRC}", branches=_iff(H)),
        _one(15, KILLING, f"{GKP_SRC}; {EQ_SRC}", branches=_iff((U,))),
        _one(15, PARALLEL, f"{GKP_SRC}; {EQ_SRC}", branches=_iff((U,))),
        _one(15, SPATIAL, SPATIAL_SRC, branches=_iff(H)),
        _one(15, ENERGY, ENERGY_SRC, expected="2"),
        _one(15, ENERGY, MIN_SRC, expected="2"),
    ]
    c += [
        ClaimRecord(16, CRITICAL, CRIT_SRC, (
            Variant(CRIT_SRC, None, None),
            Variant(EQ_SRC, None, _iff(H)),
        )),
        _one(16, HARMONIC_MAP, f"{MAP_SRC}; {EQ_SRC}", branches=_iff(H)),
        _one(16, HARMONIC_SECTION, EQ_SRC, branches=_iff(H)),
        _one(16, GEODESIC, f"{GKP_SRC}; {EQ_SRC}", branches=_iff((D16, U))),
        _one(16, KILLING, f"{GKP_SRC}; {EQ_SRC}", branches=_iff((D16,))),
        _one(16, PARALLEL, GKP_SRC, branches=NEVER),
        _one(16, SPATIAL, SPATIAL_SRC, branches=_iff(H)),
        _one(16, ENERGY, ENERGY_SRC, expected="2+((A+B)**2+A**2+B**2)*(c+d)**2/2"),
        _one(16, ENERGY, MIN_SRC, domain=H, expected="2"),
    ]
    return c


_CLAIMS: dict[int, list[ClaimRecord]] = {i: [] for i in CASE_IDS}
for _c in _a_type_claims() + _c_type_claims():
    _CLAIMS[_c.case_id].append(_c)


def claims_for(case_id: int) -> list[ClaimRecord]:
    return list(_CLAIMS[case_def(case_id).case_id])


def all_claims() -> list[ClaimRecord]:
    return [c for i in CASE_IDS for c in _CLAIMS[i]]


# -- export -------------------------------------------------------------------


def _bracket_json(table):
    return [{"i": i, "j": j, "coeffs": list(v)} for (i, j), v in sorted(table.items())]


def case_to_json(case_id: int) -> dict:
    d = case_def(case_id)
    w = rational_witnesses(case_id)
    out = {
        "case": d.case_id,
        "type": d.family_type,
        "params": list(d.params),
        "constraints": constraints(case_id),
        "dim": 4,
        "metric": [list(r) for r in d.metric],
        "brackets": _bracket_json(d.brackets),
        "frame_change": None if not d.null_basis else [list(r) for r in FRAME_C],
        "witnesses": [{"label": p.label, "params": p.to_json()} for p in w],
        "witness_algebra": al.to_json(build_case(w[0])),
        "claims": [c.to_json() for c in claims_for(case_id)],
    }
    if d.printed:
        out["brackets_as_printed"] = _bracket_json(d.printed)
    return out


def catalog_to_json() -> dict:
    return {"schema": "v1", "cases": [case_to_json(i) for i in CASE_IDS]}
