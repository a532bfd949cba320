import json
from fractions import Fraction

import numpy as np
import pytest

from harmonic_lie import algebra as al
from harmonic_lie import catalog as cat
from harmonic_lie import linalg
from harmonic_lie import scalar as sc


def test_case6_brackets():
    for eps in (1, -1):
        alg = cat.build_case(cat.CaseParams.make(6, {"A": 1, "eps": eps}))
        assert al.bracket(alg, alg.basis(0), alg.basis(3)) == (-2, 0, 0, 0)
        assert al.bracket(alg, alg.basis(1), alg.basis(3)) == (0, -5, 6 * eps, 0)
        assert al.bracket(alg, alg.basis(2), alg.basis(3)) == (0, 0, 1, 0)


def test_case13_bracket_coefficient():
    alg = cat.build_case(cat.CaseParams.make(13, dict(A=1, B=1, C=1, D=1, E=0, F=0)))
    assert al.bracket(alg, alg.basis(0), alg.basis(3))[0] == Fraction(3, 4)


@pytest.mark.parametrize("case,params,needle", [
    (3, dict(A=1, B=0, eps=1), "B != 0"),
    (2, dict(A=1, B=2, eps=1, **{"del": 1}), "A**2-B**2 >= 0"),
    (13, dict(A=0, B=1, C=1, D=1, E=0, F=0), "A != 0"),
    (16, dict(A=1, B=0, C=0, D=0, E=-1, F=0), "E+A != 0"),
    (1, dict(A=1, eps=2, **{"del": 1}), "eps in {-1, 1}"),
    (4, dict(A=5, eps=1), "needs parameter"),
    (4, dict(A=5, B=3, C=1, eps=1), "has no parameter"),
])
def test_inadmissible_params_name_the_constraint(case, params, needle):
    with pytest.raises(cat.InadmissibleParams, match=needle.replace("*", r"\*").replace("+", r"\+")
                       .replace("{", r"\{").replace("}", r"\}")):
        cat.build_case(cat.CaseParams.make(case, params))


def test_unknown_case():
    with pytest.raises(cat.InadmissibleParams):
        cat.case_def(17)


def test_parse_params():
    p = cat.parse_params(4, "A=5, B=3/1, eps=1")
    assert p.env() == {"A": 5, "B": 3, "eps": 1}
    assert str(p) == "A=5,B=3,eps=1"
    assert cat.parse_params(1, "A=1/2,eps=-1,del=1")["A"] == Fraction(1, 2)
    assert isinstance(cat.parse_params(4, "A=5,B=3,eps=1", exact=False)["A"], float)
    for bad in ("A5", "A=", "A=x/2", "=3"):
        with pytest.raises(cat.InadmissibleParams):
            cat.parse_params(4, bad)


@pytest.mark.parametrize("case,expected", [
    (4, {"A": 5, "B": 3, "eps": 1}),
    (14, {"A": 1, "D": 1, "B": 0, "C": 0, "E": 0, "eps": 1}),
    (5, {"A": 3, "B": 5, "eps": 1}),
])
def test_named_witnesses(case, expected):
    assert any(w.env() == expected for w in cat.rational_witnesses(case))


@pytest.mark.parametrize("case", cat.CASE_IDS)
def test_witnesses_valid_and_einstein(case):
    ws = cat.rational_witnesses(case)
    assert ws
    cat.check_admissible(ws[0], radicand_margin=1e-12, denominator_margin=1e-12)
    for w in ws:
        alg = cat.build_case(w)
        assert al.validate(alg) == []
        assert not isinstance(al.einstein_factor(al.koszul_connection(alg)), al.NotEinstein)
        flat = [x for p in alg.structure for r in p for x in r]
        if case == 11:
            assert not sc.all_exact(flat)
        else:
            assert sc.all_exact(flat)


@pytest.mark.parametrize("case", cat.CASE_IDS)
def test_random_draws_valid_and_einstein(case):
    rng = np.random.default_rng(case)
    for _ in range(10):
        p = cat.random_params(case, rng)
        assert cat.is_admissible(p, radicand_margin=0.01, denominator_margin=0.1)
        alg = cat.build_case(p)
        assert al.validate(alg) == []
        assert not isinstance(al.einstein_factor(al.koszul_connection(alg)), al.NotEinstein)


def test_random_params_respects_fixed_values():
    p = cat.random_params(2, np.random.default_rng(0), {"eps": -1, "del": 1})
    assert (p["eps"], p["del"]) == (-1, 1)


def test_printed_tables_differ_where_noted():
    p12 = cat.rational_witnesses(12)[0]
    printed = al.koszul_connection(cat.build_case(p12, printed=True))
    assert isinstance(al.einstein_factor(printed), al.NotEinstein)
    p15 = cat.rational_witnesses(15)[0]
    assert any(v.kind == "jacobi" for v in al.validate(cat.build_case(p15, printed=True)))
    assert cat.build_case(cat.rational_witnesses(4)[0], printed=True).structure == \
        cat.build_case(cat.rational_witnesses(4)[0]).structure


def test_frame_change_only_for_null_basis_cases():
    assert cat.frame_change(4) is None
    framed = cat.claim_frame_algebra(cat.rational_witnesses(12)[0])
    assert framed.metric == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, -1, 0), (0, 0, 0, 1))


def test_claims_cover_every_case():
    for case in cat.CASE_IDS:
        kinds = {c.kind for c in cat.claims_for(case)}
        assert cat.CRITICAL in kinds and cat.ENERGY in kinds


def test_claim_examples():
    c1 = cat.claims_for(1)
    crit = next(c for c in c1 if c.kind == cat.CRITICAL)
    assert crit.family == (("0", "1", "-1", "-1"),)
    eig = next(c for c in c1 if c.kind == cat.EIGENVALUE)
    assert eig.expected == "3*A**2" and dict(eig.requires) == {"eps": 1}
    c11 = next(c for c in cat.claims_for(11) if c.kind == cat.CRITICAL)
    gens = cat.evaluate_family(c11.family, {"A": Fraction(1)})
    assert len(gens) == 1
    g = [float(x) for x in gens[0]]
    assert np.allclose(g, [2 ** 0.5, -2 / 3 * 2 ** 0.5, 1, 0])
    assert dict(next(c for c in cat.claims_for(11) if c.kind == cat.EIGENVALUE).requires) == {"eps": -1, "del": -1}
    c15 = next(c for c in cat.claims_for(15) if c.kind == cat.HARMONIC_MAP)
    assert c15.expected == "always" and c15.status == "asserted"


def test_conflicting_claims_are_tagged():
    c7 = next(c for c in cat.claims_for(7) if c.kind == cat.EIGENVALUE)
    assert c7.status == "conflicting"
    assert {v.expected for v in c7.variants} == {"B**2-A**2+3*A*B", "B**2-A**2-3*A*B"}
    for case in (12, 13, 14, 16):
        crit = next(c for c in cat.claims_for(case) if c.kind == cat.CRITICAL)
        assert crit.status == "conflicting"
    e10 = [c for c in cat.claims_for(10) if c.kind == cat.ENERGY and c.status == "conflicting"]
    assert e10


def test_claim_families_are_independent():
    for claim in cat.all_claims():
        for var in claim.variants:
            for fam in [var.domain] + [b.family for b in (var.branches or ())]:
                w = cat.rational_witnesses(claim.case_id)[0]
                gens = cat.evaluate_family(fam, w.env())
                if gens:
                    assert linalg.rank(gens) == len(gens), (claim.case_id, claim.kind, fam)


def test_claim_requires_filter():
    eig1 = next(c for c in cat.claims_for(1) if c.kind == cat.EIGENVALUE)
    assert eig1.applies_to(cat.CaseParams.make(1, {"A": 1, "eps": 1, "del": -1}))
    assert not eig1.applies_to(cat.CaseParams.make(1, {"A": 1, "eps": -1, "del": 1}))


def test_claim_record_rejects_bad_input():
    with pytest.raises(ValueError):
        cat.ClaimRecord(1, "nonsense", "x", (cat.Variant("x"),))
    with pytest.raises(ValueError):
        cat.ClaimRecord(1, cat.CRITICAL, "x", ())


def test_catalog_json_export():
    data = json.loads(json.dumps(cat.catalog_to_json()))
    assert data["schema"] == "v1"
    assert [c["case"] for c in data["cases"]] == list(cat.CASE_IDS)
    c4 = data["cases"][3]
    assert c4["witness_algebra"]["dim"] == 4
    assert al.validate(al.from_json(c4["witness_algebra"])) == []
    claim = c4["claims"][0]
    assert set(claim) >= {"case", "kind", "family", "expected", "status"}
    assert "brackets_as_printed" in data["cases"][11] and "brackets_as_printed" in data["cases"][14]
