import json
from fractions import Fraction

import pytest

from tangleweb.algebra import (EVEN, ODD, CaseTag, CrossAlgebra, build,
                               cayley_hamilton_check, check_axioms, dual_bases,
                               skew_symmetrization_check)
from tangleweb.grassmann import super_pfaffian_check


def test_dim3_normalization(dim3):
    # e1 x e2 = e3, cyclically, antisymmetric
    assert dim3.times(0, 1) == {2: Fraction(1)}
    assert dim3.times(1, 0) == {2: Fraction(-1)}
    assert dim3.times(1, 2) == {0: Fraction(1)}
    assert dim3.times(0, 0) == {}


def test_kap_products(kap):
    # p x q = e = -(q x p); e absorbs at weight 1/2 on the odd part
    e, p, q = 0, 1, 2
    assert kap.times(p, q) == {e: Fraction(1)}
    assert kap.times(q, p) == {e: Fraction(-1)}
    assert kap.times(e, e) == {e: Fraction(1)}
    assert kap.times(e, p) == {p: Fraction(1, 2)}
    assert kap.parity == (EVEN, ODD, ODD)


def test_dim7_orthogonality_of_products(dim7):
    # b(e1 x e2, e1) = 0 and friends
    for i in range(7):
        for j in range(7):
            prod = dim7.times(i, j)
            assert prod.get(i) is None
            assert prod.get(j) is None


@pytest.mark.parametrize("case", list(CaseTag))
def test_axioms_pass(case):
    rep = check_axioms(build(case))
    assert rep.ok, str(rep)


def test_flipped_fano_triple_fails_axioms(dim7):
    # deliberately corrupt one oriented triple: the 4-linear identity breaks
    cross = [[list(col) for col in row] for row in dim7.cross]
    a, b, c = 0, 1, 2   # triple (1,2,3) zero-based
    for i, j, k in ((a, b, c), (b, c, a), (c, a, b)):
        cross[i][j][k] = Fraction(-1)
        cross[j][i][k] = Fraction(1)
    bad = CrossAlgebra(case=CaseTag.DIM7, dim=7, parity=dim7.parity,
                       gram=dim7.gram,
                       cross=tuple(tuple(tuple(col) for col in row) for row in cross),
                       names=dim7.names, gram_inv=dim7.gram_inv)
    rep = check_axioms(bad)
    assert not rep.ok
    failing = [name for name, _ in rep.failures()]
    assert any("norm compatibility" in name or "4-linear" in name for name in failing)


def test_dual_bases(dim3, dim7, kap):
    for alg in (dim3, dim7):
        db = dual_bases(alg)
        assert db.v == db.u                      # orthonormal
    db = dual_bases(kap)
    # v = (2e, q, -p) in the (e, p, q) coordinates
    assert db.v[0] == {0: Fraction(2)}
    assert db.v[1] == {2: Fraction(1)}
    assert db.v[2] == {1: Fraction(-1)}


def test_skew_symmetrization(dim7):
    assert skew_symmetrization_check(dim7).ok


def test_skew_symmetrization_wrong_case(dim3):
    with pytest.raises(ValueError):
        skew_symmetrization_check(dim3)


def test_cayley_hamilton(dim7):
    assert cayley_hamilton_check(dim7).ok


def test_super_pfaffian_coefficients():
    rep = super_pfaffian_check()
    assert rep.ok, str(rep)


def test_algebra_json_roundtrip(kap):
    obj = json.loads(kap.to_json())
    assert obj["case"] == "kap"
    assert obj["dim"] == 3
    assert obj["gram"][0][0] == "1/2"
    assert obj["cross"][1][2][0] == "1"
