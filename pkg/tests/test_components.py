import numpy as np
import pytest

from plnr.common import CountingFails, DegenerateSplit, NotDifferenceSet, NotSymmetric, WrongLength
from plnr.components import (
    BooleanFunction,
    GaussianInt,
    bentSupportDifferenceSet,
    binaryGroup,
    isBent,
    isNegabent,
    negaSpectrum,
    negaSpectrumValue,
    negabentFromProjection,
    negabentOfFourBlock,
    orthonormalBasis,
    rdsFromBoolean,
    rdsFromTwoDifferenceSets,
    standardForm,
    tripleEquivalence,
    verifyCounting,
    walsh,
    walshSpectrum,
    z4ProductIsomorphism,
)
from plnr.funcMaps import PolyMap
from plnr.groups import BilinearForm, ProductGroup
from plnr.planar import kantorPlanar
from plnr.rds import rdsFromPlanarEven, rdsFromSemifield
from plnr.semifield import PreSemifield


def _fromValue(m: int, value: int) -> BooleanFunction:
    return BooleanFunction(m, [(value >> x) & 1 for x in range(1 << m)])


def test_zero_function_is_negabent_not_bent():
    for m in (1, 2, 3, 4):
        f = BooleanFunction.zero(m)
        assert isNegabent(f)
        assert not isBent(f)


def test_x1x2_is_bent_not_negabent():
    f = BooleanFunction.fromMonomials(2, [(0, 1)])
    assert list(f.table) == [0, 0, 0, 1]
    assert isBent(f)
    assert not isNegabent(f)
    assert negaSpectrumValue(f, 0) == GaussianInt(2, 2)
    assert negaSpectrumValue(f, 0).norm() == 8


def test_odd_arity_is_never_bent():
    assert not isBent(BooleanFunction.fromMonomials(3, [(0, 1)]))


def test_spectra_agree_with_direct_sums(rng):
    f = BooleanFunction(4, rng.integers(0, 2, 16))
    spectrum = walshSpectrum(f)
    re, im = negaSpectrum(f)
    for a in range(16):
        assert walsh(f, a) == spectrum[a]
        assert negaSpectrumValue(f, a) == GaussianInt(int(re[a]), int(im[a]))


def test_parseval(rng):
    for m in (2, 3, 5):
        f = BooleanFunction(m, rng.integers(0, 2, 1 << m))
        assert int(np.sum(walshSpectrum(f) ** 2)) == 4 ** m
        re, im = negaSpectrum(f)
        assert int(np.sum(re * re + im * im)) == 4 ** m


@pytest.mark.parametrize("m", [1, 2, 3])
def test_triple_equivalence_is_exhaustive(m):
    for value in range(1 << (1 << m)):
        verdicts = tripleEquivalence(_fromValue(m, value))
        assert verdicts["agree"], (m, value, verdicts)


def test_rds_from_boolean():
    D = rdsFromBoolean(BooleanFunction.zero(2), BilinearForm.dot(2))
    assert D.params == (4, 2, 4, 2)
    with pytest.raises(CountingFails):
        rdsFromBoolean(BooleanFunction.fromMonomials(2, [(0, 1)]), BilinearForm.dot(2))


def test_counting_needs_a_symmetric_form():
    with pytest.raises(NotSymmetric):
        verifyCounting(BooleanFunction.zero(2), BilinearForm([0b10, 0b00]))
    with pytest.raises(ValueError):
        verifyCounting(BooleanFunction.zero(3), BilinearForm.dot(2))


def test_bent_support():
    f = BooleanFunction.fromMonomials(4, [(0, 1), (2, 3)])
    D = bentSupportDifferenceSet(f)
    assert D.params == (16, 1, 6, 2)
    with pytest.raises(NotDifferenceSet):
        bentSupportDifferenceSet(BooleanFunction.zero(4))


def test_four_block_from_bent_support():
    f = BooleanFunction.fromMonomials(4, [(0, 1), (2, 3)])
    support = bentSupportDifferenceSet(f)
    block = rdsFromTwoDifferenceSets(binaryGroup(4), support.R, support.R)
    assert block.verdict.params == (32, 2, 32, 16)
    assert block.toRds().k == 32

    h, report = negabentOfFourBlock(binaryGroup(4), support.R, support.R)
    assert h.m == 5
    assert report["negabent"] and report["agree"]


def test_degenerate_four_block_fails_census():
    block = rdsFromTwoDifferenceSets(ProductGroup([2]), [0], [0])
    assert not block.verdict.ok
    with pytest.raises(NotDifferenceSet):
        rdsFromTwoDifferenceSets(binaryGroup(2), [0, 1], [0])


@pytest.mark.parametrize("m", [1, 2, 3])
def test_z4_product_isomorphism(m):
    source, target, mapping = z4ProductIsomorphism(m)
    assert np.unique(mapping).size == target.order
    codes = source.codes()
    lhs = mapping[np.asarray(source.opCodes(codes[:, None], codes[None, :]))]
    rhs = np.asarray(target.opCodes(mapping[codes][:, None], mapping[codes][None, :]))
    assert np.array_equal(lhs, rhs)


def test_orthonormal_basis():
    basis = orthonormalBasis(BilinearForm.dot(3))
    B = BilinearForm.dot(3)
    assert len(basis) == 3
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            assert B.evaluate(u, v) == (1 if i == j else 0)
    assert orthonormalBasis(BilinearForm([0b10, 0b01])) is None


def test_standard_form_with_unit_basis_is_identity():
    f = _fromValue(3, 0b10010110)
    assert standardForm(f, [1, 2, 4]) == f


@pytest.mark.parametrize("c", range(1, 8))
def test_components_of_field_product_are_negabent(gf8, c):
    D = rdsFromSemifield(PreSemifield.fieldProduct(gf8))
    h, report = negabentFromProjection(D, c)
    assert report["projected"] == [8, 2, 8, 4]
    assert report["negabent"] and report["counting"]
    assert isNegabent(h)


def test_components_of_kantor_map(gf8):
    D = rdsFromPlanarEven(kantorPlanar(gf8, [1], [3]))
    for c in (1, 2, 6):
        _, report = negabentFromProjection(D, c)
        assert report["negabent"]


def test_projection_needs_the_field_product_group(gf8, gf9):
    D = rdsFromSemifield(PreSemifield.fieldProduct(gf8))
    with pytest.raises(DegenerateSplit):
        negabentFromProjection(D, 0)
    with pytest.raises(ValueError):
        negabentFromProjection(rdsFromSemifield(PreSemifield.fieldProduct(gf9)), 1)


def test_truth_table_validation():
    with pytest.raises(WrongLength):
        BooleanFunction(2, [0, 1, 0])
    with pytest.raises(ValueError):
        BooleanFunction(1, [0, 2])
    with pytest.raises(ValueError):
        BooleanFunction(0, [0])
