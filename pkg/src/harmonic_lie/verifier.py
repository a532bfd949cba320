"""Check catalog claims against the engine, and a brute-force oracle for
critical sets.

Claims are checked at parameter samples. For each sample a handful of
vectors is drawn on every subspace the claim mentions, in general position
and, for critical-set claims, on each eigenspace of the Laplacian. The
engine's answer is compared with what the claim predicts at each vector.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import algebra as al
from . import catalog as cat
from . import expr
from . import harmonicity as h
from . import linalg
from . import scalar as sc
from .scalar import DEFAULT_TOL, Tolerance

CONFIRMED, REFUTED, RESOLVED = "confirmed", "refuted", "conflicting-resolved"
POINTS_PER_SET = 5
RANDOM_DRAWS = 5
GRAY_FACTOR = 10.0


# -- sampling -----------------------------------------------------------------


def _coefficient(rng, exact: bool):
    if exact:
        return Fraction(int(rng.integers(-8, 9)), 4)
    return float(rng.uniform(-2.0, 2.0))


def _random_combination(rng, gens: Sequence[Sequence], exact: bool, dim: int = 4):
    for _ in range(100):
        coeffs = [_coefficient(rng, exact) for _ in gens]
        zero = Fraction(0) if exact else 0.0
        v = tuple(sum((c * g[k] for c, g in zip(coeffs, gens)), zero) for k in range(dim))
        if any(x != 0 for x in v):
            return v
    raise RuntimeError("could not draw a nonzero vector")  # pragma: no cover


def _identity_gens(exact: bool, dim: int = 4):
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return [tuple(one if i == j else zero for j in range(dim)) for i in range(dim)]


# -- per-point properties -------------------------------------------------------


@dataclass(frozen=True)
class Observation:
    holds: bool
    residual: float
    bound: float
    value: object = None

    @property
    def gray(self) -> bool:
        return self.bound > 0 and self.bound <= self.residual < GRAY_FACTOR * self.bound


def _from_check(c) -> Observation:
    return Observation(bool(c.ok), float(c.residual), float(c.bound))


def _from_collinear(r: h.CollinearityResult) -> Observation:
    return Observation(r.collinear, float(r.residual), float(r.bound), r.lam)


def _property(kind: str) -> Callable:
    return {
        cat.CRITICAL: lambda conn, v, tol: _from_collinear(h.collinearity_test(conn, v, tol)),
        cat.HARMONIC_MAP: lambda conn, v, tol: _from_check(h.defines_harmonic_map(conn, v, tol)),
        cat.HARMONIC_SECTION: lambda conn, v, tol: _from_check(h.is_harmonic_section(conn, v, tol)),
        cat.GEODESIC: lambda conn, v, tol: _from_check(h.is_geodesic(conn, v, tol)),
        cat.KILLING: lambda conn, v, tol: _from_check(h.is_killing(conn.alg, v, tol)),
        cat.PARALLEL: lambda conn, v, tol: _from_check(h.is_parallel(conn, v, tol)),
        cat.SPATIAL: lambda conn, v, tol: _from_collinear(h.is_spatially_harmonic(conn, v, tol)),
    }[kind]


def _param_scale(env) -> float:
    return 1.0 + max((abs(float(v)) for v in env.values()), default=0.0)


def _condition_holds(cond: str | None, env, tol: Tolerance) -> bool:
    if cond is None:
        return True
    value = expr.evaluate(cond, env)
    return sc.is_zero(value, tol, _param_scale(env) ** 2)


def _values_close(x, y, tol: Tolerance) -> Observation:
    if sc.is_exact(x) and sc.is_exact(y):
        return Observation(x == y, abs(float(x - y)), 0.0, x)
    diff = abs(float(x) - float(y))
    bound = tol.bound(1.0 + max(abs(float(x)), abs(float(y))))
    return Observation(diff < bound, diff, bound, x)


# -- outcomes -----------------------------------------------------------------


@dataclass(frozen=True)
class VariantCheck:
    label: str
    holds: bool
    agree: int
    total: int
    residual: float
    computed: object
    mismatches: tuple = ()
    gray: bool = False
    error: str = ""


@dataclass(frozen=True)
class VerificationOutcome:
    claim: cat.ClaimRecord
    claim_index: int
    params: cat.CaseParams
    verdict: str
    computed: object
    residual: float
    variants: tuple[VariantCheck, ...]
    matched: tuple[str, ...] = ()
    rerun_from: cat.CaseParams | None = None
    gray: bool = False

    def to_dict(self) -> dict:
        d = {
            "case": self.claim.case_id,
            "claim_index": self.claim_index,
            "kind": self.claim.kind,
            "source": self.claim.source,
            "status": self.claim.status,
            "expected": self.claim.expected,
            "params": self.params.to_json(),
            "params_label": self.params.label,
            "mode": "exact" if self.params.exact else "float",
            "verdict": self.verdict,
            "computed": _jsonable(self.computed),
            "residual": float(self.residual),
        }
        if self.claim.status == "conflicting":
            d["matched"] = list(self.matched)
        d["variants"] = [
            {
                "label": v.label,
                "holds": v.holds,
                "agree": v.agree,
                "total": v.total,
                "residual": float(v.residual),
                "computed": _jsonable(v.computed),
                **({"mismatches": [_jsonable(m) for m in v.mismatches]} if v.mismatches else {}),
                **({"error": v.error} if v.error else {}),
            }
            for v in self.variants
        ]
        if self.rerun_from is not None:
            d["rerun_from"] = self.rerun_from.to_json()
        if self.gray:
            d["gray"] = True
        return d


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, float, Fraction, np.floating, np.integer)):
        return sc.to_json_value(x if not isinstance(x, (np.floating, np.integer)) else float(x))
    return str(x)


def _fmt_vec(v) -> list:
    return [sc.to_json_value(x) for x in v]


# -- verification ---------------------------------------------------------------


def _sample_points(claim: cat.ClaimRecord, env, rng, exact: bool, n: int):
    """Vectors on every subspace the claim mentions, plus general position."""
    fams = []
    for var in claim.variants:
        for fam in [var.domain] + [b.family for b in (var.branches or ())]:
            if fam is not None and fam not in fams:
                fams.append(fam)
    pts = []
    for fam in fams:
        gens = cat.evaluate_family(fam, env)
        fam_exact = exact and sc.all_exact(x for g in gens for x in g)
        pts += [_random_combination(rng, gens, fam_exact) for _ in range(n)]
    pts += [_random_combination(rng, _identity_gens(exact), exact) for _ in range(n)]
    return pts


def _eigenspaces(conn, exact: bool) -> list[list]:
    """Bases of the real eigenspaces of the Laplacian matrix.

    Eigenvalues are located numerically; in exact mode each one is snapped to
    a nearby rational and kept exact only when that rational is a root.
    """
    lap = h.laplacian_matrix(conn)
    ev = np.linalg.eigvals(np.array(linalg.to_float(lap)))
    n = len(lap)
    seen: list[float] = []
    out = []
    for lam in sorted(ev.real[np.abs(ev.imag) < 1e-9]):
        if any(abs(lam - s) < 1e-7 * max(1.0, abs(lam)) for s in seen):
            continue
        seen.append(lam)
        if exact and sc.all_exact(x for row in lap for x in row):
            q = Fraction(lam).limit_denominator(10 ** 6)
            shifted = [[lap[i][j] - (q if i == j else 0) for j in range(n)] for i in range(n)]
            if linalg.det(shifted) == 0:
                out.append(linalg.nullspace(shifted))
                continue
        shifted = [[float(lap[i][j]) - (lam if i == j else 0.0) for j in range(n)] for i in range(n)]
        basis = linalg.nullspace(shifted, 1e-7)
        if basis:
            out.append(basis)
    return out


def _check_variant(var: cat.Variant, kind: str, conn, env, points, tol: Tolerance, cache) -> VariantCheck:
    alg = conn.alg
    domain = cat.evaluate_family(var.domain, env)
    pts = [p for p in points if domain is None or linalg.in_span(domain, p)]
    agree, worst, worst_ok, mismatches, gray = 0, 0.0, 0.0, [], False
    computed = None
    try:
        branches = None if var.branches is None else [
            (_condition_holds(b.condition, env, tol), cat.evaluate_family(b.family, env)) for b in var.branches
        ]
    except (ValueError, ZeroDivisionError) as exc:
        return VariantCheck(var.label, False, 0, len(pts), float("inf"), None, error=str(exc))
    for p in pts:
        if kind in cat.VALUE_KINDS:
            key = (cat.CRITICAL if kind == cat.EIGENVALUE else "energy", p)
            if key not in cache:
                cache[key] = (_property(cat.CRITICAL)(conn, p, tol) if kind == cat.EIGENVALUE
                              else h.energy_density(conn, p))
            got = cache[key]
            penv = dict(env, a=p[0], b=p[1], c=p[2], d=p[3], nV=al.norm_squared(alg, p))
            try:
                want = expr.evaluate(var.expected, penv)
            except (ValueError, ZeroDivisionError) as exc:
                return VariantCheck(var.label, False, agree, len(pts), float("inf"), computed, error=str(exc))
            if kind == cat.EIGENVALUE:
                if not got.holds:
                    obs = Observation(False, got.residual, got.bound, None)
                    gray |= got.gray
                    mismatches.append({"vector": _fmt_vec(p), "expected": want, "computed": "not an eigenvector"})
                    worst = max(worst, got.residual)
                    computed = computed if computed is not None else "not an eigenvector"
                    continue
                value = got.value
            else:
                value = got
            obs = _values_close(value, want, tol)
            computed = value if computed is None or computed == "not an eigenvector" else computed
        else:
            key = (kind, p)
            if key not in cache:
                cache[key] = _property(kind)(conn, p, tol)
            got = cache[key]
            expected = True if branches is None else any(
                ok and (fam is None or linalg.in_span(fam, p)) for ok, fam in branches
            )
            obs = Observation(got.holds == expected, got.residual, got.bound, got.holds)
            want, value = expected, got.holds
        gray |= obs.gray
        if obs.holds:
            agree += 1
            worst_ok = max(worst_ok, obs.residual)
        else:
            worst = max(worst, obs.residual)
            mismatches.append({"vector": _fmt_vec(p), "expected": want, "computed": value})
    if kind not in cat.VALUE_KINDS:
        computed = f"{agree}/{len(pts)} sampled vectors agree"
    holds = agree == len(pts) and len(pts) > 0
    return VariantCheck(var.label, holds, agree, len(pts), worst if mismatches else worst_ok, computed,
                        tuple(mismatches[:3]), gray)


def verify_claim(claim: cat.ClaimRecord, params: cat.CaseParams, rng=None, tol: Tolerance = DEFAULT_TOL,
                 points: int = POINTS_PER_SET, claim_index: int = 0, rerun: bool = True,
                 conn: al.Connection | None = None) -> VerificationOutcome:
    """Check one claim at one parameter sample."""
    if params.case_id != claim.case_id:
        raise cat.InadmissibleParams(f"claim is about case {claim.case_id}, params are for case {params.case_id}")
    cat.check_admissible(params)
    if not claim.applies_to(params):
        need = ", ".join(f"{k}={v}" for k, v in claim.requires)
        raise cat.InadmissibleParams(f"claim only applies when {need}")
    if rng is None:
        rng = np.random.default_rng(0)
    if conn is None:
        conn = al.koszul_connection(cat.claim_frame_algebra(params))
    env = params.env()
    pts = _sample_points(claim, env, rng, params.exact, points)
    if claim.kind in (cat.CRITICAL, cat.HARMONIC_SECTION):
        # critical vectors fill eigenspaces, which random points almost never hit
        for basis in _eigenspaces(conn, params.exact and conn.alg.exact):
            ok = params.exact and sc.all_exact(x for b in basis for x in b)
            pts += [_random_combination(rng, basis, ok) for _ in range(2)]
    cache: dict = {}
    checks = tuple(_check_variant(v, claim.kind, conn, env, pts, tol, cache) for v in claim.variants)
    gray = any(c.gray for c in checks)

    if gray and rerun and not params.exact:
        for w in cat.rational_witnesses(claim.case_id):
            if claim.applies_to(w) and w.exact:
                out = verify_claim(claim, w, np.random.default_rng(0), tol, points, claim_index, rerun=False)
                return VerificationOutcome(out.claim, claim_index, out.params, out.verdict, out.computed,
                                           out.residual, out.variants, out.matched, params, gray=True)

    primary = checks[0]
    if claim.status == "conflicting":
        matched = tuple(c.label for c in checks if c.holds)
        verdict = RESOLVED
        residual = min(c.residual for c in checks)
        computed = next((c.computed for c in checks if c.holds), primary.computed)
    else:
        matched = ()
        verdict = CONFIRMED if primary.holds else REFUTED
        residual, computed = primary.residual, primary.computed
    return VerificationOutcome(claim, claim_index, params, verdict, computed, residual, checks, matched, gray=gray)


def parameter_samples(claim: cat.ClaimRecord, seed: int, claim_index: int, draws: int = RANDOM_DRAWS,
                      mode: str = "exact") -> list[cat.CaseParams]:
    """Witnesses (rational, then irrational thresholds) that the claim applies to, plus random draws."""
    out = [w for w in cat.rational_witnesses(claim.case_id) if claim.applies_to(w)]
    if mode == "float":
        out = [w.as_float() for w in out]
    out += [w for w in cat.threshold_witnesses(claim.case_id) if claim.applies_to(w)]
    rng = np.random.default_rng([seed, claim.case_id, claim_index, 999])
    out += [cat.random_params(claim.case_id, rng, dict(claim.requires)) for _ in range(draws)]
    return out


def run_full_verification(seed: int = 42, cases: Sequence[int] | None = None, mode: str = "exact",
                          tol: Tolerance = DEFAULT_TOL, draws: int = RANDOM_DRAWS) -> dict:
    """Every claim of every case at witnesses and random draws; deterministic in ``seed``."""
    if mode not in ("exact", "float"):
        raise ValueError("mode must be 'exact' or 'float'")
    cases = list(cat.CASE_IDS if cases is None else cases)
    outcomes = []
    for case in cases:
        conns: dict = {}
        for idx, claim in enumerate(cat.claims_for(case)):
            for pidx, params in enumerate(parameter_samples(claim, seed, idx, draws, mode)):
                key = params.values
                if key not in conns:
                    conns[key] = al.koszul_connection(cat.claim_frame_algebra(params))
                rng = np.random.default_rng([seed, case, idx, pidx])
                outcomes.append(verify_claim(claim, params, rng, tol, claim_index=idx, conn=conns[key]))
    return build_report(outcomes, seed, mode, tol, cases, draws)


def summarize(outcomes: Sequence[VerificationOutcome]) -> dict:
    s = {CONFIRMED: 0, REFUTED: 0, RESOLVED: 0}
    for o in outcomes:
        s[o.verdict] += 1
    refuted_claims = sorted({(o.claim.case_id, o.claim_index) for o in outcomes if o.verdict == REFUTED})
    unmatched = sorted({(o.claim.case_id, o.claim_index) for o in outcomes if o.verdict == RESOLVED and not o.matched})
    return {
        "confirmed": s[CONFIRMED],
        "refuted": s[REFUTED],
        "conflicting": s[RESOLVED],
        "refuted_asserted": s[REFUTED],
        "refuted_claims": [{"case": c, "claim_index": i} for c, i in refuted_claims],
        "conflicting_without_match": [{"case": c, "claim_index": i} for c, i in unmatched],
        "gate": "pass" if s[REFUTED] == 0 else "fail",
    }


def build_report(outcomes, seed, mode, tol, cases, draws) -> dict:
    return {
        "schema": "v1",
        "meta": {
            "seed": seed,
            "mode": mode,
            "tolerances": {"rel": tol.rel, "abs": tol.abs},
            "cases": list(cases),
            "random_draws": draws,
            "points_per_set": POINTS_PER_SET,
        },
        "outcomes": [o.to_dict() for o in outcomes],
        "summary": summarize(outcomes),
    }


# -- renderers ------------------------------------------------------------------


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


CSV_FIELDS = ["case", "claim_index", "kind", "status", "source", "params", "mode", "verdict", "matched",
              "computed", "residual", "expected"]


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for o in report["outcomes"]:
        w.writerow({
            **{k: o.get(k, "") for k in CSV_FIELDS},
            "params": ";".join(f"{k}={v}" for k, v in o["params"].items()),
            "matched": ";".join(o.get("matched", [])),
            "computed": json.dumps(o["computed"]) if not isinstance(o["computed"], str) else o["computed"],
        })
    return buf.getvalue()


def report_markdown(report: dict) -> str:
    """One table per case, a row per claim, with verdict counts over all samples."""
    lines = ["# Claim verification", ""]
    m = report["meta"]
    lines.append(f"seed {m['seed']}, mode {m['mode']}, tolerance rel {m['tolerances']['rel']:g} "
                 f"abs {m['tolerances']['abs']:g}")
    lines.append("")
    rows: dict = {}
    for o in report["outcomes"]:
        rows.setdefault(o["case"], {}).setdefault(o["claim_index"], []).append(o)
    for case in sorted(rows):
        lines += [f"## Case ({case})", "", "| kind | source | expected | verdicts | computed (first sample) |",
                  "|---|---|---|---|---|"]
        for idx in sorted(rows[case]):
            os_ = rows[case][idx]
            counts: dict = {}
            for o in os_:
                key = o["verdict"]
                if key == RESOLVED:
                    key += " [" + (", ".join(o["matched"]) or "none") + "]"
                counts[key] = counts.get(key, 0) + 1
            verdicts = "; ".join(f"{k} x{v}" for k, v in sorted(counts.items()))
            first = os_[0]
            lines.append(f"| {first['kind']} | {first['source']} | `{first['expected']}` | {verdicts} | "
                         f"{_md(first['computed'])} |")
        lines.append("")
    s = report["summary"]
    lines += ["## Summary", "", f"confirmed {s['confirmed']}, refuted {s['refuted']}, "
              f"conflicting-resolved {s['conflicting']}; gate: {s['gate']}", ""]
    return "\n".join(lines)


def _md(x) -> str:
    return str(x).replace("|", "\\|")


# -- brute-force oracle -----------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    lo: float = -2.0
    hi: float = 2.0
    step: float = 0.25

    def axis(self) -> np.ndarray:
        n = int(round((self.hi - self.lo) / self.step))
        if n < 0 or self.step <= 0:
            raise ValueError("empty grid")
        return self.lo + self.step * np.arange(n + 1)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``"lo:hi:step"``, e.g. ``"-2:2:0.25"``."""
        try:
            lo, hi, step = (float(sc.to_scalar(t, True)) for t in text.split(":"))
        except ValueError:
            raise ValueError(f"grid must be lo:hi:step, got {text!r}") from None
        if step <= 0 or hi < lo:
            raise ValueError("empty grid")
        return cls(lo, hi, step)


@dataclass(frozen=True)
class Cluster:
    lam: float
    count: int
    rank: int
    basis: np.ndarray  # rank x dim, orthonormal rows

    def to_dict(self) -> dict:
        return {"lambda": float(self.lam), "count": self.count, "rank": self.rank,
                "basis": [[float(x) + 0.0 for x in row] for row in self.basis]}


@dataclass
class ScanResult:
    points: np.ndarray
    kinds: list[str]
    lambdas: np.ndarray
    clusters: list[Cluster] = field(default_factory=list)

    def critical_mask(self) -> np.ndarray:
        return np.array([k != h.NOT_COLLINEAR for k in self.kinds])

    def to_dict(self, with_points: bool = False) -> dict:
        out = {
            "grid_points": int(len(self.points)),
            "critical_points": int(self.critical_mask().sum()),
            "clusters": [c.to_dict() for c in self.clusters],
        }
        if with_points:
            out["points"] = [
                {"vector": [float(x) for x in p], "kind": k, "lambda": None if k == h.NOT_COLLINEAR else float(lam)}
                for p, k, lam in zip(self.points, self.kinds, self.lambdas)
            ]
        return out


def classify_points(lap: np.ndarray, pts: np.ndarray, tol: Tolerance = DEFAULT_TOL):
    """Collinearity kinds for many vectors at once, given the Laplacian matrix.

    Same decision rule as :func:`harmonicity.collinear_to`, vectorised; valid
    because the rough Laplacian is linear.
    """
    lv = pts @ lap.T
    nl = np.linalg.norm(lv, axis=1)
    nv = np.linalg.norm(pts, axis=1)
    bound = np.maximum(tol.rel * (1 + nl) * (1 + nv), tol.abs)
    n = pts.shape[1]
    minors = np.max(np.abs(np.stack([lv[:, i] * pts[:, j] - lv[:, j] * pts[:, i]
                                     for i in range(n) for j in range(i + 1, n)], axis=1)), axis=1)
    lam = np.einsum("ij,ij->i", lv, pts) / np.einsum("ij,ij->i", pts, pts)
    kinds = np.where(nl < bound, h.ZERO, np.where(minors < bound, h.EIGEN, h.NOT_COLLINEAR))
    lam = np.where(kinds == h.ZERO, 0.0, lam)
    return list(kinds), lam


def fit_subspace(pts: np.ndarray, rank_tol: float = 1e-6) -> tuple[int, np.ndarray]:
    """Smallest subspace containing the points: (rank, orthonormal basis rows)."""
    unit = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    _, s, vt = np.linalg.svd(unit, full_matrices=False)
    r = int((s > rank_tol * s[0]).sum()) if s.size else 0
    return r, vt[:r]


def brute_force_critical_scan(alg: al.MetricLieAlgebra, conn: al.Connection | None = None,
                              grid: GridSpec = GridSpec(), tol: Tolerance = DEFAULT_TOL,
                              lam_tol: float = 1e-6, rank_tol: float = 1e-6) -> ScanResult:
    """Classify every nonzero grid vector and fit a subspace to each eigenvalue cluster."""
    if conn is None:
        conn = al.koszul_connection(alg)
    axis = grid.axis()
    if axis.size == 0:
        raise ValueError("empty grid")
    mesh = np.stack(np.meshgrid(*([axis] * alg.dim), indexing="ij"), axis=-1).reshape(-1, alg.dim)
    mesh = mesh[np.any(mesh != 0, axis=1)]
    if not len(mesh):
        raise ValueError("empty grid")
    lap = np.array(linalg.to_float(h.laplacian_matrix(conn)))
    kinds, lam = classify_points(lap, mesh, tol)
    crit = np.array([k != h.NOT_COLLINEAR for k in kinds])
    clusters = []
    if crit.any():
        idx = np.where(crit)[0]
        order = idx[np.argsort(lam[idx], kind="stable")]
        groups, cur = [], [order[0]]
        for i in order[1:]:
            if abs(lam[i] - lam[cur[-1]]) <= lam_tol * (1 + abs(lam[cur[-1]])):
                cur.append(i)
            else:
                groups.append(cur)
                cur = [i]
        groups.append(cur)
        for g in groups:
            r, basis = fit_subspace(mesh[g], rank_tol)
            clusters.append(Cluster(float(np.mean(lam[g])), len(g), r, basis))
    return ScanResult(mesh, kinds, lam, clusters)


def subspace_angle(a: np.ndarray, b: np.ndarray) -> float:
    """Largest principal angle between two subspaces (rows span them); pi/2 if dimensions differ."""
    a, b = np.atleast_2d(np.asarray(a, float)), np.atleast_2d(np.asarray(b, float))
    if a.shape[0] != b.shape[0]:
        return float(np.pi / 2)
    qa, _ = np.linalg.qr(a.T)
    qb, _ = np.linalg.qr(b.T)
    cos = np.linalg.svd(qa.T @ qb, compute_uv=False).min()
    # the sine part keeps small angles accurate where arccos would not
    sin = np.linalg.svd(qb - qa @ (qa.T @ qb), compute_uv=False).max()
    return float(np.arctan2(sin, cos))
