import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from harmonic_lie import algebra as al
from harmonic_lie import catalog as cat

LORENTZ = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]


def abelian(metric=LORENTZ):
    return al.MetricLieAlgebra.from_brackets({}, [[Fraction(x) for x in r] for r in metric], "abelian")


def case_alg(case_id, frame=True, **params):
    p = cat.CaseParams.make(case_id, params)
    return cat.claim_frame_algebra(p) if frame else cat.build_case(p)


def case_conn(case_id, frame=True, **params):
    return al.koszul_connection(case_alg(case_id, frame, **params))


def F(*xs):
    return tuple(Fraction(x) for x in xs)


@pytest.fixture
def flat():
    return al.koszul_connection(abelian())
