"""Planarity in odd and even characteristic, known planar families, and monomial search."""
import logging
from math import gcd
from time import monotonic
from typing import Sequence

import numpy as np

from .common import (
    BadChain,
    Convention,
    EVEN_LOG_TABLE_LIMIT,
    EVEN_SEARCH_LIMIT,
    EvenCharacteristic,
    InvariantBreach,
    MonomialHit,
    MonomialSearchReport,
    ODD_SEARCH_LIMIT,
    OddCharacteristic,
    OddQuotientViolated,
    PlanarVerdict,
    RangeTooLarge,
    WrongCharacteristic,
    ZeroZeta,
)
from .funcMaps import PolyMap, reduceExponent
from .gf import FiniteField
from .kernels import firstNonBijectiveEven, firstNonBijectiveOdd
from .workers import firstFailure, runCells

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------

def isPlanarOdd(f: PolyMap, threads: int | None = None) -> PlanarVerdict:
    """f(x+a) - f(x) bijective for every a != 0."""
    F = f.field
    if F.p == 2:
        raise EvenCharacteristic(f"{F} has characteristic 2; use isPlanarEven")
    failing = firstFailure(firstNonBijectiveOdd, (f.table, F.digits, F.weights, F.p), 1, F.q, threads)
    return PlanarVerdict(planar=failing < 0, convention=Convention.ODD,
                         failingA=None if failing < 0 else failing)


def isPlanarEven(f: PolyMap, threads: int | None = None) -> PlanarVerdict:
    """f(x+a) + f(x) + a*x a permutation for every a != 0."""
    F = f.field
    if F.p != 2:
        raise OddCharacteristic(f"{F} has odd characteristic; use isPlanarOdd")
    if F.q > EVEN_LOG_TABLE_LIMIT:
        raise RangeTooLarge(f"Even planarity over {F} needs log tables (q <= {EVEN_LOG_TABLE_LIMIT})")
    failing = firstFailure(firstNonBijectiveEven, (f.table, F.logTable, F.expTable), 1, F.q, threads)
    return PlanarVerdict(planar=failing < 0, convention=Convention.EVEN,
                         failingA=None if failing < 0 else failing)


def isPlanar(f: PolyMap, threads: int | None = None) -> PlanarVerdict:
    if f.field.p == 2:
        return isPlanarEven(f, threads)
    return isPlanarOdd(f, threads)


def twoToOne(f: PolyMap) -> bool:
    """Every nonzero value is taken by exactly 0 or 2 inputs."""
    if f.field.p == 2:
        raise EvenCharacteristic(f"2-to-1 criterion is stated for odd characteristic, got {f.field}")
    counts = np.bincount(f.table, minlength=f.field.q)[1:]
    return bool(np.all((counts == 0) | (counts == 2)))


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def cmMonomial(field: FiniteField, k: int) -> PolyMap:
    """x^((3^k+1)/2) over GF(3^m); planar exactly when gcd(k, 2m) = 1."""
    if field.p != 3:
        raise WrongCharacteristic(f"Coulter-Matthews monomials live in characteristic 3, got {field}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return PolyMap.monomial(field, (3 ** k + 1) // 2)


def checkKantorChain(field: FiniteField, chainDegrees: Sequence[int], zetas: Sequence[int]) -> None:
    M = field.m
    degrees = [int(d) for d in chainDegrees]
    if field.p != 2:
        raise WrongCharacteristic(f"Kantor maps live in characteristic 2, got {field}")
    if not degrees:
        raise BadChain("Subfield chain is empty")
    if len(zetas) != len(degrees):
        raise BadChain(f"{len(degrees)} subfields but {len(zetas)} zetas")
    previous = M
    for d in degrees:
        if d < 1 or d >= previous or previous % d:
            raise BadChain(f"Degrees {degrees} are not a strictly decreasing divisor chain of {M}")
        previous = d
    if (M // degrees[-1]) % 2 == 0:
        raise OddQuotientViolated(f"[GF(2^{M}):GF(2^{degrees[-1]})] = {M // degrees[-1]} is even")
    for z in zetas:
        if int(z) == 0:
            raise ZeroZeta("Every zeta must be nonzero")
        if not 0 < int(z) < field.q:
            raise ValueError(f"zeta {z} is not an element of {field}")


def kantorPlanar(field: FiniteField, chainDegrees: Sequence[int], zetas: Sequence[int]) -> PolyMap:
    """Value table of f(x) = (x * sum_i tr_i(zeta_i x))^2 where tr_i is the trace onto GF(2^d_i)."""
    checkKantorChain(field, chainDegrees, zetas)
    xs = field.elements()
    inner = np.zeros(field.q, dtype=np.int64)
    for d, z in zip(chainDegrees, zetas):
        inner = field.add(inner, field.relTrace(field.mul(int(z), xs), int(d)))
    return PolyMap.fromTable(field, field.power(field.mul(xs, inner), 2))


# ---------------------------------------------------------------------------
# Monomial search
# ---------------------------------------------------------------------------

def exponentOrbit(d: int, p: int, q: int) -> tuple[int, ...]:
    """Orbit of d under d -> p*d, reduced into [1, q-1]."""
    orbit = [d]
    e = reduceExponent(d * p, q)
    while e != d:
        orbit.append(e)
        e = reduceExponent(e * p, q)
    return tuple(sorted(orbit))


def _isPowerOf(d: int, p: int) -> bool:
    while d % p == 0:
        d //= p
    return d == 1


def _checkRange(field: FiniteField, dRange: tuple[int, int]) -> tuple[int, int]:
    lo, hi = (int(v) for v in dRange)
    if lo < 1 or lo > hi:
        raise ValueError(f"Exponent range {lo}..{hi} is empty or starts below 1")
    if hi > field.q - 1:
        raise RangeTooLarge(f"Exponents above q-1 = {field.q - 1} repeat; got {hi}")
    return lo, hi


def _searchOdd(field: FiniteField, lo: int, hi: int, restrict: bool,
               threads: int | None) -> tuple[list[MonomialHit], int]:
    p = field.p

    def root(d: int) -> int:
        while restrict and d % p == 0:
            d //= p
        return d

    roots = sorted({root(d) for d in range(lo, hi + 1)})
    logger.info(f"Step 1: testing {len(roots)} exponents over {field} (c = 1)")
    verdicts = runCells(lambda d: isPlanarOdd(PolyMap.monomial(field, d), threads=1).planar, roots, threads)
    planarRoots = {d for d, ok in zip(roots, verdicts) if ok}

    hits = []
    for d in range(lo, hi + 1):
        if root(d) in planarRoots:
            hits.append(MonomialHit(d=d, cs=[1], method="exhaustive" if root(d) == d else "orbit"))
    return hits, len(roots)


def _searchEven(field: FiniteField, lo: int, hi: int,
                threads: int | None) -> tuple[list[MonomialHit], int]:
    q = field.q
    allCs = list(range(1, q))
    cells: list[tuple[int, int, int]] = []   # (d, class index j, number of classes g)
    for d in range(lo, hi + 1):
        if _isPowerOf(d, 2):
            cells.append((d, 0, 0))
        else:
            g = gcd(d - 2, q - 1)
            cells += [(d, j, g) for j in range(g)]
    logger.info(f"Step 1: testing {len(cells)} (d, c-class) cells over {field}")

    def check(cell):
        d, j, g = cell
        c = 1 if g == 0 else int(field.expTable[j])
        return isPlanarEven(PolyMap.monomial(field, d, c), threads=1).planar

    verdicts = runCells(check, cells, threads)

    hits = []
    byD: dict[int, list] = {}
    for (d, j, g), ok in zip(cells, verdicts):
        byD.setdefault(d, []).append((j, g, ok))
    for d in sorted(byD):
        cs: list[int] = []
        method = "exhaustive"
        for j, g, ok in byD[d]:
            if g == 0:
                if not ok:
                    raise InvariantBreach(f"Linearized monomial x^{d} over {field} failed the planarity scan")
                cs = allCs
                method = "affine"
                break
            if ok:
                cs += [int(c) for c in field.expTable[j:q - 1:g]]
            if (q - 1) // g > 1:
                method = "coset"
        if cs:
            hits.append(MonomialHit(d=d, cs=sorted(cs), method=method))
    return hits, len(cells)


def searchPlanarMonomials(field: FiniteField, convention: Convention,
                          dRange: tuple[int, int] | None = None, restrict: bool = True,
                          threads: int | None = None) -> MonomialSearchReport:
    """Exponents d (and coefficients c) with c*x^d planar.

    Odd convention fixes c = 1 and, with restrict, tests only p-free exponents,
    extending each verdict over its Frobenius orbit d -> p*d. Even convention
    tests one c per coset of the (d-2)-th powers, since c*x^d and c*u^(d-2)*x^d
    share their verdict; linearized monomials are planar for every c.
    """
    start = monotonic()
    lo, hi = _checkRange(field, dRange or (1, field.q - 1))
    if convention == Convention.ODD:
        if field.p == 2:
            raise EvenCharacteristic(f"Odd-convention search over {field}")
        if field.q > ODD_SEARCH_LIMIT:
            raise RangeTooLarge(f"Odd search is limited to q <= {ODD_SEARCH_LIMIT}, got {field.q}")
        hits, checked = _searchOdd(field, lo, hi, restrict, threads)
    else:
        if field.p != 2:
            raise OddCharacteristic(f"Even-convention search over {field}")
        if field.q > EVEN_SEARCH_LIMIT:
            raise RangeTooLarge(f"Even search is limited to q <= {EVEN_SEARCH_LIMIT}, got {field.q}")
        hits, checked = _searchEven(field, lo, hi, threads)

    hitSet = {h.d for h in hits}
    orbits = sorted({exponentOrbit(d, field.p, field.q) for d in hitSet})
    report = MonomialSearchReport(fieldSpec=field.spec, convention=convention, hits=hits,
                                  orbits=[list(o) for o in orbits], checked=checked,
                                  elapsed=monotonic() - start)
    logger.info(f"Step 2: {len(hits)} planar exponents in {lo}..{hi} over {field} ({report.elapsed:.2f}s)")
    return report
