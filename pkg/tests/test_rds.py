import numpy as np
import pytest

from plnr.common import InvariantBreach, NoSplitting, NotASubgroup, NotInForbidden, NotPlanar, TooLarge
from plnr.funcMaps import PolyMap
from plnr.gf import makeField
from plnr.groups import ProductGroup, abelianInvariants, elementOrderCensus
from plnr.rds import (
    componentFunction,
    differenceCensus,
    forbiddenHyperplane,
    projectRds,
    rdsFromPlanar,
    rdsFromPlanarEven,
    rdsFromPlanarOdd,
    rdsFromSemifield,
    relativeDifferenceSet,
    traceKernel,
    translate,
    verifyRds,
)
from plnr.semifield import PreSemifield


def _z8Example():
    return relativeDifferenceSet(ProductGroup([8]), [0, 4], [1, 2, 4], source="Z8")


@pytest.mark.parametrize("orders,N,R,params", [
    ([8], [0, 4], [1, 2, 4], (4, 2, 3, 1)),
    ([4, 4], [(0, 0), (0, 2), (2, 0), (2, 2)], [(0, 0), (0, 1), (1, 3), (3, 0)], (4, 4, 4, 1)),
    ([3, 3], [(0, 0), (0, 1), (0, 2)], [(0, 0), (1, 1), (2, 1)], (3, 3, 3, 1)),
])
def test_worked_examples(orders, N, R, params):
    verdict = verifyRds(ProductGroup(orders), N, R)
    assert verdict.ok
    assert verdict.params == params
    assert verdict.violations == []


def test_difference_census_of_z8_example():
    G = ProductGroup([8])
    counts = differenceCensus(G, np.array([1, 2, 4]))
    assert counts[0] == 0 and counts[4] == 0
    assert all(counts[g] == 1 for g in (1, 2, 3, 5, 6, 7))


def test_failing_set_reports_violations():
    verdict = verifyRds(ProductGroup([8]), [0, 4], [0, 1, 2])
    assert not verdict.ok
    assert verdict.params is None
    assert verdict.violations
    assert "m" not in verdict.toDict()


def test_forbidden_set_must_be_a_subgroup():
    with pytest.raises(NotASubgroup):
        verifyRds(ProductGroup([8]), [4], [1, 2, 4])


def test_repeated_elements_are_rejected():
    with pytest.raises(ValueError):
        verifyRds(ProductGroup([8]), [0, 4], [1, 1, 2])


def test_wrapper_raises_on_failure():
    with pytest.raises(InvariantBreach):
        relativeDifferenceSet(ProductGroup([8]), [0, 4], [0, 1, 2])


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)])
def test_rds_from_field_product(p, m):
    D = rdsFromSemifield(PreSemifield.fieldProduct(makeField(p, m)))
    q = p ** m
    assert D.params == (q, q, q, 1)
    if p == 2:
        assert abelianInvariants(D.group) == [4] * m
    else:
        assert set(elementOrderCensus(D.group)) == {1, p}


def test_rds_from_albert_semifield(gf27):
    D = rdsFromSemifield(PreSemifield.albert(gf27, 1))
    assert D.params == (27, 27, 27, 1)
    assert D.group.spec.endswith(":albert1")
    assert np.array_equal(D.function, PreSemifield.albert(gf27, 1).table.diagonal())


def test_rds_from_planar_functions(gf9, gf8):
    odd = rdsFromPlanarOdd(PolyMap.monomial(gf9, 2))
    assert odd.params == (9, 9, 9, 1)
    assert abelianInvariants(odd.group) == [3, 3, 3, 3]
    even = rdsFromPlanarEven(PolyMap.monomial(gf8, 2))
    assert even.params == (8, 8, 8, 1)
    assert rdsFromPlanar(PolyMap.monomial(gf9, 2)).params == odd.params


def test_rds_from_non_planar_function(gf9):
    with pytest.raises(NotPlanar):
        rdsFromPlanarOdd(PolyMap.monomial(gf9, 4))


def test_rds_field_size_limit():
    with pytest.raises(TooLarge):
        rdsFromPlanarOdd(PolyMap.monomial(makeField(3, 7), 2))


def test_translate_keeps_parameters():
    D = _z8Example()
    T = translate(D, 3)
    assert list(T.R) == [4, 5, 7]
    assert T.params == D.params


def test_projection_of_z8_example():
    P = projectRds(_z8Example(), [4])
    assert P.params == (4, 1, 3, 2)
    assert P.group.order == 4
    assert P.projection is not None


def test_projection_outside_forbidden_subgroup():
    with pytest.raises(NotInForbidden):
        projectRds(_z8Example(), [2])


def test_projection_onto_trace_hyperplane(gf4):
    D = rdsFromSemifield(PreSemifield.fieldProduct(gf4))
    P = projectRds(D, forbiddenHyperplane(D, 1))
    assert P.params == (4, 2, 4, 2)


def test_trace_kernel(gf8):
    kernel = traceKernel(gf8, 3)
    assert kernel.size == 4
    assert np.all(np.asarray(gf8.trace(gf8.mul(3, kernel))) == 0)
    with pytest.raises(NoSplitting):
        traceKernel(gf8, 0)


def test_component_function(gf8):
    D = rdsFromSemifield(PreSemifield.fieldProduct(gf8))
    xs = gf8.elements()
    for c in (1, 5):
        expected = np.asarray(gf8.trace(gf8.mul(c, gf8.mul(xs, xs))))
        assert np.array_equal(componentFunction(D, c), expected)
    with pytest.raises(NoSplitting):
        componentFunction(D, 0)
    with pytest.raises(NoSplitting):
        componentFunction(_z8Example(), 1)
