"""Harmonicity checks for invariant vector fields on four-dimensional metric Lie algebras.

Exit status is 2 for malformed input, 1 when ``verify`` refutes a claim that
has a single reading, and 0 otherwise.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import algebra as al
from . import catalog as cat
from . import expr
from . import harmonicity as h
from . import scalar as sc
from . import verifier as vf

FORMATS = ("json", "csv", "markdown")


class InputError(ValueError):
    pass


# -- argument helpers -----------------------------------------------------------


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return x


def _common(p: argparse.ArgumentParser, formats=FORMATS) -> None:
    p.add_argument("--mode", choices=("exact", "float"), default="exact",
                   help="rational arithmetic (default) or floating point")
    p.add_argument("--format", choices=formats, default="json")
    p.add_argument("--rel-tol", type=_positive, default=sc.TAU_REL, help="relative tolerance")
    p.add_argument("--abs-tol", type=_positive, default=sc.TAU_ABS, help="absolute tolerance floor")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")


def _algebra_source(p: argparse.ArgumentParser, vector: bool = True) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--case", type=int, help="catalog case 1..16")
    src.add_argument("--algebra", help="JSON file with a user-supplied metric Lie algebra")
    p.add_argument("--params", help="case parameters, e.g. A=5,B=3,eps=1 (p/q allowed); "
                                    "default is the case's first witness")
    p.add_argument("--basis", choices=("frame", "bracket"), default="frame",
                   help="for cases 12-16: pseudo-orthonormal frame (default) or the basis of the bracket table")
    if vector:
        p.add_argument("--vector", required=True, help="coefficients a,b,c,d (use --vector=-1,... for a leading minus)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmonic-lie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="every harmonicity test for one vector")
    _algebra_source(p)
    _common(p)

    for name, text in (("laplacian", "rough Laplacian of the vector and its collinearity kind"),
                       ("energy", "energy density of the vector"),
                       ("curvature-trace", "curvature term of the harmonic-map condition")):
        p = sub.add_parser(name, help=text)
        _algebra_source(p)
        _common(p)

    p = sub.add_parser("verify", help="check catalog claims against the engine")
    p.add_argument("--case", type=int, action="append", help="restrict to a case (repeatable)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--draws", type=int, default=vf.RANDOM_DRAWS, help="random parameter draws per claim")
    _common(p)

    p = sub.add_parser("scan", help="brute-force grid search for critical vectors")
    _algebra_source(p, vector=False)
    p.add_argument("--grid", default="-2:2:0.25", help="lo:hi:step per axis (default -2:2:0.25)")
    p.add_argument("--points", action="store_true", help="include every grid point in the output")
    _common(p)

    p = sub.add_parser("catalog", help="the claims database")
    csub = p.add_subparsers(dest="action", required=True)
    d = csub.add_parser("dump", help="write every case and claim")
    d.add_argument("--case", type=int, action="append")
    _common(d)
    return parser


def _tol(args) -> sc.Tolerance:
    return sc.Tolerance(args.rel_tol, args.abs_tol)


def _load(args) -> tuple[al.MetricLieAlgebra, dict]:
    exact = args.mode == "exact"
    if args.algebra:
        if args.params:
            raise InputError("--params only applies with --case")
        try:
            data = json.loads(Path(args.algebra).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"cannot read {args.algebra}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.algebra} is not valid JSON: {exc}") from None
        alg = al.from_json(data, exact)
        problems = al.validate(alg)
        if problems:
            raise InputError("invalid algebra: " + "; ".join(str(p) for p in problems[:5]))
        return alg, {"algebra": str(args.algebra)}
    if args.params:
        params = cat.parse_params(args.case, args.params, exact)
    else:
        params = cat.rational_witnesses(args.case)[0]
        if not exact:
            params = params.as_float()
    if args.basis == "frame":
        alg = cat.claim_frame_algebra(params)
    else:
        alg = cat.build_case(params)
    meta = {"case": args.case, "params": params.to_json(), "basis": args.basis}
    if not alg.exact and exact:
        meta["note"] = "irrational structure constants; computed in floating point"
    return alg, meta


def _vector(alg: al.MetricLieAlgebra, text: str, exact: bool) -> tuple:
    parts = [s.strip() for s in text.split(",")]
    try:
        v = tuple(sc.to_scalar(s, exact and alg.exact) for s in parts)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"malformed vector {text!r}") from None
    if len(v) != alg.dim:
        raise InputError(f"vector has {len(v)} entries, algebra has dimension {alg.dim}")
    return v


# -- output ---------------------------------------------------------------------


def _rows_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _rows_markdown(header: list[str], rows: list[list]) -> str:
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    out += ["| " + " | ".join(str(c).replace("|", "\\|") for c in r) + " |" for r in rows]
    return "\n".join(out) + "\n"


def _emit(payload: dict, fmt: str, rows: tuple[list[str], list[list]] | None = None) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    header, body = rows if rows is not None else (["key", "value"], _flatten(payload))
    return _rows_csv(header, body) if fmt == "csv" else _rows_markdown(header, body)


def _flatten(d, prefix=""):
    rows = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            rows += _flatten(v, key + ".")
        elif isinstance(v, list):
            rows.append([key, json.dumps(v)])
        else:
            rows.append([key, json.dumps(v) if not isinstance(v, str) else v])
    return rows


def _vec_json(v) -> list:
    return [sc.to_json_value(x) for x in v]


# -- commands --------------------------------------------------------------------


def cmd_classify(args) -> tuple[str, int]:
    alg, meta = _load(args)
    v = _vector(alg, args.vector, args.mode == "exact")
    rep = h.classify(al.koszul_connection(alg), v, _tol(args))
    return _emit({"schema": "v1", "meta": meta, "report": rep.to_dict()}, args.format), 0


def cmd_laplacian(args) -> tuple[str, int]:
    alg, meta = _load(args)
    v = _vector(alg, args.vector, args.mode == "exact")
    conn = al.koszul_connection(alg)
    lv = h.rough_laplacian(conn, v)
    out = {"schema": "v1", "meta": meta, "vector": _vec_json(v), "laplacian": _vec_json(lv)}
    if any(x != 0 for x in v):
        r = h.collinearity_test(conn, v, _tol(args))
        out["kind"] = r.kind
        out["lambda"] = None if r.lam is None else sc.to_json_value(r.lam)
    return _emit(out, args.format), 0


def cmd_energy(args) -> tuple[str, int]:
    alg, meta = _load(args)
    v = _vector(alg, args.vector, args.mode == "exact")
    e = h.energy_density(al.koszul_connection(alg), v)
    return _emit({"schema": "v1", "meta": meta, "vector": _vec_json(v), "energy_density": sc.to_json_value(e)},
                 args.format), 0


def cmd_curvature_trace(args) -> tuple[str, int]:
    alg, meta = _load(args)
    v = _vector(alg, args.vector, args.mode == "exact")
    t = h.curvature_trace(al.koszul_connection(alg), v)
    return _emit({"schema": "v1", "meta": meta, "vector": _vec_json(v), "curvature_trace": _vec_json(t)},
                 args.format), 0


def cmd_verify(args) -> tuple[str, int]:
    if args.draws < 0:
        raise InputError("--draws must be non-negative")
    for c in args.case or ():
        cat.case_def(c)
    report = vf.run_full_verification(args.seed, args.case, args.mode, _tol(args), args.draws)
    text = {"json": vf.report_json, "csv": vf.report_csv, "markdown": vf.report_markdown}[args.format](report)
    return text, 0 if report["summary"]["refuted_asserted"] == 0 else 1


def cmd_scan(args) -> tuple[str, int]:
    alg, meta = _load(args)
    try:
        grid = vf.GridSpec.parse(args.grid)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    res = vf.brute_force_critical_scan(alg, None, grid, _tol(args))
    out = {"schema": "v1", "meta": dict(meta, grid={"lo": grid.lo, "hi": grid.hi, "step": grid.step}),
           **res.to_dict(with_points=args.points)}
    rows = (["lambda", "count", "rank", "basis"],
            [[c.lam, c.count, c.rank, json.dumps((np.round(c.basis, 12) + 0.0).tolist())] for c in res.clusters])
    return _emit(out, args.format, rows), 0


def cmd_catalog(args) -> tuple[str, int]:
    data = cat.catalog_to_json()
    if args.case:
        for c in args.case:
            cat.case_def(c)
        data["cases"] = [c for c in data["cases"] if c["case"] in args.case]
    rows = []
    for case in data["cases"]:
        for i, claim in enumerate(case["claims"]):
            rows.append([case["case"], i, claim["kind"], claim["status"], claim["source"], claim["expected"]])
    return _emit(data, args.format, (["case", "claim_index", "kind", "status", "source", "expected"], rows)), 0


COMMANDS = {
    "classify": cmd_classify,
    "laplacian": cmd_laplacian,
    "energy": cmd_energy,
    "curvature-trace": cmd_curvature_trace,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "catalog": cmd_catalog,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = COMMANDS[args.command](args)
    except (InputError, cat.InadmissibleParams, expr.ExprError, al.DimensionError, ValueError) as exc:
        print(f"harmonic-lie: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
