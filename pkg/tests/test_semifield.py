import numpy as np
import pytest

from plnr.common import AxiomsFail, NotAffineDO, NotPlanar, ProductRule, ZeroElement
from plnr.funcMaps import PolyMap
from plnr.gf import makeField
from plnr.semifield import (
    PreSemifield,
    checkAxioms,
    diagonal,
    opposite,
    presemifieldFromPlanarEven,
    presemifieldFromPlanarOdd,
    requirePresemifield,
    rowsArePermutations,
    spreadFromSemifield,
    toSemifield,
)


def test_field_product_is_a_semifield(gf9):
    report = checkAxioms(PreSemifield.fieldProduct(gf9))
    assert report.semifield
    assert report.identity == 1
    assert not report.sampled


def test_large_fields_sample_distributivity():
    report = checkAxioms(PreSemifield.fieldProduct(makeField(3, 4)), samples=2000, seed=7)
    assert report.sampled
    assert report.seed == 7
    assert report.s2


def test_albert_over_gf27(gf27):
    S = PreSemifield.albert(gf27, 1)
    report = checkAxioms(S)
    assert report.presemifield
    assert S.commutative
    assert S.groupKind == "albert1"


def test_albert_over_gf9_has_zero_divisors(gf9):
    # x o y = xy(x^2 + y^2) vanishes when (y/x)^2 = -1, a square in GF(9)
    report = checkAxioms(PreSemifield.albert(gf9, 1))
    assert not report.s3
    x, y = report.witnesses["S3"]
    assert PreSemifield.albert(gf9, 1).mul(x, y) == 0
    with pytest.raises(AxiomsFail):
        requirePresemifield(PreSemifield.albert(gf9, 1))


def test_twisted_field_is_not_commutative(gf9):
    S = PreSemifield.twistedField(gf9, 1)
    assert checkAxioms(S).presemifield
    assert not S.commutative
    assert not S.hasIdentity
    assert rowsArePermutations(S)


@pytest.mark.parametrize("e", [1, 2, 5])
def test_identity_repair(gf27, e):
    S = PreSemifield.albert(gf27, 1)
    T = toSemifield(S, e)
    assert T.ruleTag == ProductRule.ISOTOPE
    assert T.identityElement == S.mul(e, e)
    assert checkAxioms(T).semifield
    # (x o e) * (e o y) = x o y
    w = T.isotopy
    assert np.array_equal(w.F, S.table[:, e]) and np.array_equal(w.G, S.table[e, :])
    assert np.array_equal(w.H, np.arange(gf27.q))
    assert np.array_equal(T.table[w.F[:, None], w.G[None, :]], w.H[S.table])


def test_identity_repair_needs_nonzero_element(gf9):
    with pytest.raises(ZeroElement):
        toSemifield(PreSemifield.fieldProduct(gf9), 0)


def test_opposite(gf9):
    S = PreSemifield.twistedField(gf9, 1)
    T = opposite(S)
    assert T.ruleTag == ProductRule.OPPOSITE
    assert np.array_equal(T.table, S.table.T)
    assert np.array_equal(opposite(T).table, S.table)


def test_diagonal_of_field_product(gf8):
    d = diagonal(PreSemifield.fieldProduct(gf8))
    assert d == PolyMap.monomial(gf8, 2)


def test_presemifield_from_square(gf9):
    S = presemifieldFromPlanarOdd(PolyMap.monomial(gf9, 2))
    # x o y = 2xy, so 2 = 1/2 is the identity
    assert S.identityElement == 2
    assert checkAxioms(S).semifield
    assert not S.warnings


def test_presemifield_from_even_planar(gf8):
    S = presemifieldFromPlanarEven(PolyMap.monomial(gf8, 2))
    assert np.array_equal(S.table, PreSemifield.fieldProduct(gf8).table)


def test_non_planar_input_is_rejected(gf9, gf8):
    with pytest.raises(NotPlanar):
        presemifieldFromPlanarOdd(PolyMap.monomial(gf9, 4))
    with pytest.raises(NotPlanar):
        presemifieldFromPlanarEven(PolyMap.monomial(gf8, 3))


def test_non_do_planar_map_warns():
    # Coulter-Matthews x^14 over GF(3^5) is planar but not Dembowski-Ostrom
    f = PolyMap.monomial(makeField(3, 5), 14)
    with pytest.warns(NotAffineDO):
        S = presemifieldFromPlanarOdd(f)
    assert len(S.warnings) == 1


def test_product_table_validation(gf4):
    with pytest.raises(ValueError):
        PreSemifield.fromTable(gf4, np.zeros((3, 3), dtype=np.int64))
    with pytest.raises(ValueError):
        PreSemifield.fromTable(gf4, np.full((4, 4), 4))
    zero = PreSemifield.fromTable(gf4, np.zeros((4, 4), dtype=np.int64))
    assert not rowsArePermutations(zero)
    assert not checkAxioms(zero).s3


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2)])
def test_desarguesian_spreads(p, m):
    spread = spreadFromSemifield(PreSemifield.fieldProduct(makeField(p, m)))
    assert len(spread.subspaces) == p ** m + 1
    assert spread.verify()


def test_spread_of_repaired_albert_semifield(gf27):
    spread = spreadFromSemifield(toSemifield(PreSemifield.albert(gf27, 1)))
    assert spread.verify()


def test_spread_needs_a_semifield(gf9):
    with pytest.raises(AxiomsFail):
        spreadFromSemifield(PreSemifield.twistedField(gf9, 1))
    with pytest.raises(AxiomsFail):
        spreadFromSemifield(PreSemifield.fromTable(gf9, np.zeros((9, 9), dtype=np.int64)))


def test_broken_spread_fails_verification(gf4):
    spread = spreadFromSemifield(PreSemifield.fieldProduct(gf4))
    spread.subspaces[1] = spread.subspaces[0]
    assert not spread.verify()
