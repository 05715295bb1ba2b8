"""Relative difference sets: verification, constructions, projection and components."""
import logging
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .common import (
    InvariantBreach,
    MAX_RDS_FIELD_ORDER,
    MAX_RDS_GROUP_ORDER,
    MAX_VIOLATIONS,
    NoSplitting,
    NotASubgroup,
    NotInForbidden,
    NotPlanar,
    ProjectionNotInjective,
    RdsVerdict,
    TooLarge,
)
from .funcMaps import PolyMap
from .gf import FiniteField
from .groups import (
    CocycleGroup,
    Epimorphism,
    FiniteGroup,
    GroupElement,
    isSubgroup,
    quotientMap,
    subgroupClosure,
    toCodes,
)
from .planar import isPlanarEven, isPlanarOdd
from .semifield import PreSemifield, requirePresemifield
from .workers import runCells

logger = logging.getLogger(__name__)

CENSUS_ROWS = 256


@dataclass
class RelativeDifferenceSet:
    group: FiniteGroup
    forbidden: np.ndarray           # sorted codes of N
    R: np.ndarray                   # sorted codes of R
    params: tuple                   # (m, n, k, lambda)
    function: np.ndarray | None = None      # f(x) when R = {(x, f(x))} in a cocycle group
    projection: Epimorphism | None = None   # parent group -> group, set by projectRds
    source: str = ""

    @property
    def k(self) -> int:
        return int(self.R.size)

    def elements(self) -> list[str]:
        return [self.group.formatCode(int(r)) for r in self.R]

    def toDict(self) -> dict:
        return {
            "group": self.group.spec,
            "forbidden": [self.group.formatCode(int(n)) for n in self.forbidden],
            "R": self.elements(),
            "params": list(self.params),
            "source": self.source,
        }


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _uniqueCodes(group: FiniteGroup, items: Iterable, what: str) -> np.ndarray:
    codes = toCodes(group, items)
    unique = np.unique(codes)
    if unique.size != codes.size:
        raise ValueError(f"{what} lists {codes.size - unique.size} repeated elements")
    return unique


def differenceCensus(group: FiniteGroup, R: np.ndarray, threads: int | None = None) -> np.ndarray:
    """counts[g] = #{(r, r') : r != r', r * r'^-1 = g}."""
    inverses = np.asarray(group.invCodes(R), dtype=np.int64)

    def rows(start: int) -> np.ndarray:
        block = np.asarray(group.opCodes(R[start:start + CENSUS_ROWS, None], inverses[None, :]))
        return np.bincount(block.ravel(), minlength=group.order)

    counts = sum(runCells(rows, list(range(0, R.size, CENSUS_ROWS)), threads))
    counts = np.asarray(counts, dtype=np.int64)
    counts[group.identityCode] -= R.size
    return counts


def verifyRds(group: FiniteGroup, forbidden: Iterable, R: Iterable,
              threads: int | None = None) -> RdsVerdict:
    """Exact difference census of R against the forbidden subgroup N."""
    if group.order > MAX_RDS_GROUP_ORDER:
        raise TooLarge(f"Difference census of {group.spec} (order {group.order}) exceeds {MAX_RDS_GROUP_ORDER}")
    N = _uniqueCodes(group, forbidden, "Forbidden subgroup")
    if not isSubgroup(group, N):
        raise NotASubgroup(f"Forbidden set of size {N.size} is not a subgroup of {group.spec}")
    R = _uniqueCodes(group, R, "R")

    counts = differenceCensus(group, R, threads)
    inN = np.zeros(group.order, dtype=bool)
    inN[N] = True
    outside = np.flatnonzero(~inN)
    lam = int(np.bincount(counts[outside]).argmax()) if outside.size else 0

    violations = [(int(g), int(counts[g]), 0) for g in np.flatnonzero(inN & (counts != 0))]
    violations += [(int(g), int(counts[g]), lam) for g in outside[counts[outside] != lam]]
    if violations:
        logger.debug(f"{group.spec}: {len(violations)} elements break the difference census")
        return RdsVerdict(ok=False, violations=sorted(violations)[:MAX_VIOLATIONS])
    return RdsVerdict(ok=True, params=(group.order // N.size, int(N.size), int(R.size), lam))


def relativeDifferenceSet(group: FiniteGroup, forbidden: Iterable, R: Iterable,
                          source: str = "") -> RelativeDifferenceSet:
    """Verified wrapper; raises InvariantBreach when the census fails."""
    verdict = verifyRds(group, forbidden, R)
    if not verdict.ok:
        raise InvariantBreach(f"{source or 'R'} is not a relative difference set in {group.spec}: "
                              f"{verdict.violations}")
    return RelativeDifferenceSet(group=group, forbidden=_uniqueCodes(group, forbidden, "N"),
                                 R=_uniqueCodes(group, R, "R"), params=verdict.params, source=source)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def _checkFieldOrder(F: FiniteField) -> None:
    if F.q > MAX_RDS_FIELD_ORDER:
        raise TooLarge(f"Difference sets over {F} exceed q = {MAX_RDS_FIELD_ORDER}")


def _graph(group: CocycleGroup, values: np.ndarray, source: str) -> RelativeDifferenceSet:
    xs = np.arange(values.size, dtype=np.int64)
    D = relativeDifferenceSet(group, group.forbiddenCodes(), group.join(xs, values), source=source)
    expected = (values.size,) * 3 + (1,)
    if D.params != expected:
        raise InvariantBreach(f"{source} gave parameters {D.params}, expected {expected}")
    D.function = np.asarray(values, dtype=np.int64)
    return D


def rdsFromSemifield(S: PreSemifield) -> RelativeDifferenceSet:
    """{(x, x o x)} in the group (x,y)*(x',y') = (x+x', y+y'+x o x')."""
    _checkFieldOrder(S.field)
    requirePresemifield(S)
    xs = S.field.elements()
    return _graph(CocycleGroup.fromSemifield(S), np.asarray(S.mul(xs, xs)), f"semifield {S.ruleTag}")


def rdsFromPlanarOdd(f: PolyMap) -> RelativeDifferenceSet:
    """{(x, f(x))} in the direct product GF(q) x GF(q)."""
    _checkFieldOrder(f.field)
    verdict = isPlanarOdd(f)
    if not verdict.planar:
        raise NotPlanar(f"{f!r} is not planar (a = {verdict.failingA})")
    return _graph(CocycleGroup.directProduct(f.field), f.table, "planar odd")


def rdsFromPlanarEven(f: PolyMap) -> RelativeDifferenceSet:
    """{(x, f(x))} in the group (x,y)*(x',y') = (x+x', y+y'+x*x')."""
    _checkFieldOrder(f.field)
    verdict = isPlanarEven(f)
    if not verdict.planar:
        raise NotPlanar(f"{f!r} is not planar (a = {verdict.failingA})")
    return _graph(CocycleGroup.fieldProduct(f.field), f.table, "planar even")


def rdsFromPlanar(f: PolyMap) -> RelativeDifferenceSet:
    if f.field.p == 2:
        return rdsFromPlanarEven(f)
    return rdsFromPlanarOdd(f)


def translate(D: RelativeDifferenceSet, g) -> RelativeDifferenceSet:
    """R * g, again a relative difference set with the same parameters."""
    code = g.code if isinstance(g, GroupElement) else int(toCodes(D.group, [g])[0])
    R = np.sort(np.asarray(D.group.opCodes(D.R, code), dtype=np.int64))
    verdict = verifyRds(D.group, D.forbidden, R)
    if not verdict.ok or verdict.params != D.params:
        raise InvariantBreach(f"Translate of {D.source} by {D.group.formatCode(code)} lost the difference property")
    return replace(D, R=R, function=None, projection=None, source=f"{D.source} * {D.group.formatCode(code)}")


# ---------------------------------------------------------------------------
# Projection
# ---------------------------------------------------------------------------

def spanningSubset(group: FiniteGroup, codes: Iterable) -> list[int]:
    """A subset of codes generating the same subgroup, chosen greedily."""
    target = subgroupClosure(group, codes)
    chosen: list[int] = []
    span = subgroupClosure(group, [])
    for c in target:
        if span.size == target.size:
            break
        if c not in span:
            chosen.append(int(c))
            span = subgroupClosure(group, chosen)
    return chosen


def projectRds(D: RelativeDifferenceSet, U: Iterable) -> RelativeDifferenceSet:
    """Image of R in G/U; parameters become (m, n/u, k, lambda*u)."""
    generators = toCodes(D.group, U)
    subgroup = subgroupClosure(D.group, generators)
    outside = np.setdiff1d(subgroup, D.forbidden)
    if outside.size:
        raise NotInForbidden(f"{D.group.formatCode(int(outside[0]))} lies outside the forbidden subgroup")

    quotient, phi = quotientMap(D.group, spanningSubset(D.group, generators))
    image = np.asarray(phi(D.R), dtype=np.int64)
    if np.unique(image).size != image.size:
        raise ProjectionNotInjective(f"R collapses to {np.unique(image).size} of {image.size} elements in {quotient.spec}")
    forbidden = np.unique(np.asarray(phi(D.forbidden)))

    verdict = verifyRds(quotient, forbidden, image)
    m, n, k, lam = D.params
    u = int(subgroup.size)
    expected = (m, n // u, k, lam * u)
    if not verdict.ok or verdict.params != expected:
        raise InvariantBreach(f"Projection of {D.source} by |U|={u} gave {verdict.toDict()}, expected {expected}")
    logger.debug(f"Projected {D.params} -> {expected} in {quotient.spec}")
    return RelativeDifferenceSet(group=quotient, forbidden=forbidden, R=np.sort(image), params=expected,
                                 projection=phi, source=f"{D.source} / |U|={u}")


# ---------------------------------------------------------------------------
# Component functions
# ---------------------------------------------------------------------------

def traceKernel(field: FiniteField, c: int) -> np.ndarray:
    """{y : Tr(c*y) = 0}, an index-p subgroup of (GF(q), +) for c != 0."""
    if int(c) == 0:
        raise NoSplitting("Direction c = 0 does not define a hyperplane")
    ys = field.elements()
    return ys[np.asarray(field.trace(field.mul(int(c), ys))) == 0]


def forbiddenHyperplane(D: RelativeDifferenceSet, c: int) -> list[int]:
    """Generators (as codes of D.group) of the kernel of y -> Tr(c*y) inside N = {(0, y)}."""
    group = _splitGroup(D)
    return spanningSubset(group, group.join(0, traceKernel(group.target, c)))


def _splitGroup(D: RelativeDifferenceSet) -> CocycleGroup:
    if not isinstance(D.group, CocycleGroup):
        raise NoSplitting(f"{D.group.spec} carries no declared splitting of its forbidden subgroup")
    return D.group


def componentFunction(D: RelativeDifferenceSet, c: int, offsets=None) -> np.ndarray:
    """Tr(c * n_x) where R meets the coset (x, t(x))N in (x, t(x)) * (0, n_x).

    offsets is the table of t; the default t = 0 uses the representatives (x, 0).
    """
    group = _splitGroup(D)
    F = group.target
    if not 0 <= int(c) < F.q:
        raise ValueError(f"Direction {c} is not an element of {F}")
    if int(c) == 0:
        raise NoSplitting("Direction c = 0 does not split N")

    xs, ys = group.split(D.R)
    if np.unique(xs).size != group.base.q:
        raise ValueError(f"{D.source} does not meet every coset of N exactly once")
    values = np.empty(group.base.q, dtype=np.int64)
    values[xs] = ys
    if offsets is not None:
        offsets = np.asarray(offsets, dtype=np.int64)
        if offsets.shape != values.shape:
            raise ValueError(f"Expected {values.size} offsets, got {offsets.size}")
        # (x, t) * (0, n) = (x, t + n + beta(x, 0)) and beta(x, 0) = 0
        values = F.sub(values, offsets)
    return np.asarray(F.trace(F.mul(int(c), values)), dtype=np.int64)
