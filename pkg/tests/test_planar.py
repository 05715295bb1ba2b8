from math import gcd

import pytest

from plnr.common import (
    BadChain,
    Convention,
    EvenCharacteristic,
    OddCharacteristic,
    OddQuotientViolated,
    RangeTooLarge,
    WrongCharacteristic,
    ZeroZeta,
)
from plnr.funcMaps import PolyMap, doExponents, reduceExponent
from plnr.gf import makeField
from plnr.planar import (
    cmMonomial,
    exponentOrbit,
    isPlanar,
    isPlanarEven,
    isPlanarOdd,
    kantorPlanar,
    searchPlanarMonomials,
    twoToOne,
)
from plnr.rds import rdsFromPlanarEven
from plnr.semifield import checkAxioms, presemifieldFromPlanarEven


def test_square_is_planar(gf9):
    verdict = isPlanar(PolyMap.monomial(gf9, 2))
    assert verdict.planar
    assert verdict.convention == Convention.ODD
    assert verdict.failingA is None


def test_cube_is_not_planar_in_characteristic_three(gf9):
    # x^3 is additive, so every shift difference is constant
    verdict = isPlanarOdd(PolyMap.monomial(gf9, 3))
    assert not verdict.planar
    assert verdict.failingA == 1


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_coulter_matthews_monomials(m, k):
    F = makeField(3, m)
    assert isPlanar(cmMonomial(F, k)).planar == (gcd(k, 2 * m) == 1)


@pytest.mark.parametrize("p,m,k", [(3, 3, 1), (5, 3, 1), (3, 2, 1), (3, 4, 2)])
def test_albert_monomials(p, m, k):
    F = makeField(p, m)
    expected = (m // gcd(k, m)) % 2 == 1
    assert isPlanar(PolyMap.monomial(F, p ** k + 1)).planar == expected


@pytest.mark.parametrize("p,m", [(3, 2), (3, 3), (5, 2)])
def test_two_to_one_matches_planarity_on_do_monomials(p, m):
    F = makeField(p, m)
    for d in sorted(doExponents(F)):
        f = PolyMap.monomial(F, d)
        assert twoToOne(f) == isPlanarOdd(f).planar, d


@pytest.mark.parametrize("p,m,count,minPlanar", [(3, 3, 200, 0), (3, 2, 100, 1)])
def test_two_to_one_matches_planarity_on_random_do_polynomials(rng, p, m, count, minPlanar):
    F = makeField(p, m)
    exponents = sorted(doExponents(F))
    planarSeen = 0
    for _ in range(count):
        coeffs = rng.integers(0, F.q, len(exponents))
        f = PolyMap(F, dict(zip(exponents, coeffs.tolist())))
        planar = isPlanarOdd(f).planar
        assert twoToOne(f) == planar, dict(zip(exponents, coeffs.tolist()))
        planarSeen += planar
    assert planarSeen >= minPlanar


@pytest.mark.parametrize("terms", [{10: 1, 6: 1, 2: 2}, {10: 1, 6: 2, 2: 2}])
@pytest.mark.parametrize("m,expected", [(3, True), (4, False), (5, True)])
def test_trinomial_verdicts(terms, m, expected):
    assert isPlanar(PolyMap(makeField(3, m), terms)).planar == expected


@pytest.mark.parametrize("terms", [{10: 1, 6: 1, 2: 2}, {10: 1, 6: 2, 2: 2}])
def test_trinomials_collapse_on_gf9(gf9, terms):
    # x^10 = x^2 on GF(9), leaving x^6 and 2x^6
    f = PolyMap(gf9, terms)
    assert len(f.terms) == 1 and 6 in f.terms
    assert isPlanar(f).planar


@pytest.mark.parametrize("p,m", [(2, 3), (2, 4)])
def test_linearized_monomials_are_even_planar(p, m):
    F = makeField(p, m)
    for d in (1, 2, 4):
        for c in (1, 3):
            assert isPlanarEven(PolyMap.monomial(F, d, c)).planar


def test_cube_is_never_even_planar_on_gf4(gf4):
    # the shift map of c*x^3 has kernel {0, a + 1/c}
    for c in range(1, 4):
        assert not isPlanarEven(PolyMap.monomial(gf4, 3, c)).planar


def test_conventions_are_checked(gf8, gf9):
    with pytest.raises(EvenCharacteristic):
        isPlanarOdd(PolyMap.monomial(gf8, 3))
    with pytest.raises(OddCharacteristic):
        isPlanarEven(PolyMap.monomial(gf9, 2))
    with pytest.raises(EvenCharacteristic):
        twoToOne(PolyMap.monomial(gf8, 3))
    with pytest.raises(WrongCharacteristic):
        cmMonomial(gf8, 1)


def test_kantor_maps_on_gf8_are_planar(gf8):
    for zeta in range(1, 8):
        assert isPlanarEven(kantorPlanar(gf8, [1], [zeta])).planar


def test_kantor_chain_of_length_two():
    F = makeField(2, 9)
    f = kantorPlanar(F, [3, 1], [5, 9])
    assert isPlanarEven(f).planar


def test_kantor_random_zetas_on_gf512(rng):
    F = makeField(2, 9)
    for z1, z2 in rng.integers(1, F.q, size=(20, 2)).tolist():
        f = kantorPlanar(F, [3, 1], [z1, z2])
        assert isPlanarEven(f).planar, (z1, z2)
        S = presemifieldFromPlanarEven(f)
        assert S.commutative
        assert checkAxioms(S).presemifield, (z1, z2)
        assert rdsFromPlanarEven(f).params == (F.q, F.q, F.q, 1)


def test_kantor_chain_errors(gf8):
    with pytest.raises(BadChain):
        kantorPlanar(gf8, [], [])
    with pytest.raises(BadChain):
        kantorPlanar(gf8, [1], [1, 2])
    with pytest.raises(BadChain):
        kantorPlanar(makeField(2, 6), [2, 3], [1, 1])
    with pytest.raises(ZeroZeta):
        kantorPlanar(gf8, [1], [0])
    with pytest.raises(OddQuotientViolated):
        kantorPlanar(makeField(2, 4), [1], [1])
    with pytest.raises(WrongCharacteristic):
        kantorPlanar(makeField(3, 3), [1], [1])


def test_exponent_orbit():
    assert exponentOrbit(2, 3, 9) == (2, 6)
    assert exponentOrbit(4, 3, 9) == (4,)
    assert exponentOrbit(3, 2, 16) == (3, 6, 9, 12)


def _familyExponents(p: int, m: int) -> set[int]:
    """Known planar monomial exponents over GF(p^m) with their Frobenius orbits."""
    q = p ** m
    ds = {p ** k + 1 for k in range(m) if (m // gcd(k, m)) % 2 == 1}
    if p == 3:
        ds |= {(3 ** k + 1) // 2 for k in range(1, 2 * m) if gcd(k, 2 * m) == 1}
    return {e for d in ds for e in exponentOrbit(reduceExponent(d, q), p, q)}


@pytest.mark.parametrize("p,m", [(3, 2), (5, 2), (3, 3), (7, 2), (3, 4)])
def test_odd_search_finds_known_families(p, m):
    q = p ** m
    report = searchPlanarMonomials(makeField(p, m), Convention.ODD)
    hits = set(report.hitExponents())
    assert _familyExponents(p, m) <= hits
    for d in hits:
        assert reduceExponent(p * d, q) in hits, d
    assert sorted(e for orbit in report.orbits for e in orbit) == sorted(hits)


def test_odd_search_on_gf9():
    report = searchPlanarMonomials(makeField(3, 2), Convention.ODD)
    assert report.hitExponents() == [2, 6]
    assert report.orbits == [[2, 6]]


def test_odd_search_without_restriction_agrees(gf27):
    restricted = searchPlanarMonomials(gf27, Convention.ODD, (1, 26))
    full = searchPlanarMonomials(gf27, Convention.ODD, (1, 26), restrict=False)
    assert restricted.hitExponents() == full.hitExponents()
    assert 2 in full.hitExponents() and 4 in full.hitExponents()
    assert full.checked >= restricted.checked


@pytest.mark.parametrize("k", [2, 3])
def test_even_monomial_with_coefficient(k):
    F = makeField(2, 2 * k)
    d = 2 ** k + 1
    report = searchPlanarMonomials(F, Convention.EVEN, (d, d))
    assert report.hitExponents() == [d]
    hit = report.hits[0]
    for c in hit.cs[:3]:
        assert isPlanarEven(PolyMap.monomial(F, d, c)).planar
    assert len(hit.cs) < F.q - 1


def test_scaled_x20_is_even_planar_on_gf64():
    F = makeField(2, 6)
    report = searchPlanarMonomials(F, Convention.EVEN, (20, 20))
    assert report.hitExponents() == [20]
    hit = report.hits[0]
    assert hit.cs
    assert isPlanarEven(PolyMap.monomial(F, 20, hit.cs[0])).planar


def _smallExponentSweep(m):
    F = makeField(2, m)
    bound = 2 ** (m // 4)
    report = searchPlanarMonomials(F, Convention.EVEN, (1, bound))
    for hit in report.hits:
        assert hit.d & (hit.d - 1) == 0, (m, hit.d, hit.cs[:4])
    assert [h.d for h in report.hits] == [d for d in range(1, bound + 1) if d & (d - 1) == 0]


@pytest.mark.parametrize("m", range(2, 12))
def test_small_even_planar_exponents_are_powers_of_two(m):
    _smallExponentSweep(m)


@pytest.mark.slow
@pytest.mark.parametrize("m", [12, 13, 14])
def test_small_even_planar_exponents_are_powers_of_two_on_large_fields(m):
    _smallExponentSweep(m)


def test_even_search_on_gf4(gf4):
    report = searchPlanarMonomials(gf4, Convention.EVEN)
    assert report.hitExponents() == [1, 2]
    assert all(h.method == "affine" and h.cs == [1, 2, 3] for h in report.hits)


def test_search_errors(gf9, gf8):
    with pytest.raises(ValueError):
        searchPlanarMonomials(gf9, Convention.ODD, (5, 2))
    with pytest.raises(RangeTooLarge):
        searchPlanarMonomials(gf9, Convention.ODD, (1, 9))
    with pytest.raises(EvenCharacteristic):
        searchPlanarMonomials(gf8, Convention.ODD)
    with pytest.raises(OddCharacteristic):
        searchPlanarMonomials(gf9, Convention.EVEN)
