"""Pre-semifields as multiplications on the additive group of GF(p^m)."""
import logging
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import galois
import numpy as np

from .common import (
    AxiomReport,
    AxiomsFail,
    DEFAULT_SEED,
    DOTag,
    EXHAUSTIVE_TRIPLES_LIMIT,
    MAX_SPREAD_ORDER,
    NotAffineDO,
    NotPlanar,
    PRODUCT_TABLE_LIMIT,
    ProductRule,
    TooLarge,
    ZeroElement,
)
from .funcMaps import PolyMap, classify
from .gf import FiniteField
from .planar import isPlanarEven, isPlanarOdd

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IsotopyWitness:
    """T[F(x), G(y)] = H(S[x, y]) for an isotope T of S, maps as permutation arrays of encodings.

    toSemifield sets F(x) = x o e, G(y) = e o y and H to the identity, so that
    (x o e) * (e o y) = x o y.
    """
    F: np.ndarray
    G: np.ndarray
    H: np.ndarray


class PreSemifield:
    def __init__(self, field: FiniteField, rule: Callable, ruleTag: ProductRule,
                 isotopy: IsotopyWitness | None = None, warnings: list[str] | None = None,
                 groupKind: str | None = None):
        self.field = field
        self._rule = rule
        self.ruleTag = ruleTag
        # token naming the closed-form rule in group spec strings, None when only a table describes it
        self.groupKind = groupKind
        self.isotopy = isotopy
        self.warnings: list[str] = list(warnings or [])

    # ------------------------------------------------------------------
    # Constructors for the closed-form rules
    # ------------------------------------------------------------------

    @classmethod
    def fieldProduct(cls, field: FiniteField) -> "PreSemifield":
        return cls(field, field.mul, ProductRule.FIELD, groupKind="product")

    @classmethod
    def albert(cls, field: FiniteField, k: int) -> "PreSemifield":
        """x o y = x^(p^k) y + x y^(p^k)."""
        def rule(x, y):
            return field.add(field.mul(field.frobenius(x, k), y), field.mul(x, field.frobenius(y, k)))
        return cls(field, rule, ProductRule.ALBERT, groupKind=f"albert{k}")

    @classmethod
    def twistedField(cls, field: FiniteField, k: int) -> "PreSemifield":
        """x o y = x^(p^k) y; commutative only when k = 0 mod m."""
        return cls(field, lambda x, y: field.mul(field.frobenius(x, k), y), ProductRule.TWISTED,
                   groupKind=f"twisted{k}")

    @classmethod
    def fromTable(cls, field: FiniteField, table) -> "PreSemifield":
        table = np.asarray(table, dtype=np.int64)
        if table.shape != (field.q, field.q):
            raise ValueError(f"Product table has shape {table.shape}, expected ({field.q}, {field.q})")
        if table.min() < 0 or table.max() >= field.q:
            raise ValueError(f"Product table has entries outside {field}")
        S = cls(field, lambda x, y: table[np.asarray(x), np.asarray(y)], ProductRule.TABLE)
        S.__dict__["table"] = table
        return S

    # ------------------------------------------------------------------
    # Product
    # ------------------------------------------------------------------

    @property
    def q(self) -> int:
        return self.field.q

    @cached_property
    def table(self) -> np.ndarray:
        if self.q > PRODUCT_TABLE_LIMIT:
            raise TooLarge(f"Product tables are limited to q <= {PRODUCT_TABLE_LIMIT}, got {self.q}")
        xs = self.field.elements()
        return np.asarray(self._rule(xs[:, None], xs[None, :]), dtype=np.int64)

    def mul(self, x, y):
        if self.q <= PRODUCT_TABLE_LIMIT:
            result = self.table[np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)]
        else:
            result = np.asarray(self._rule(x, y))
        return int(result) if np.ndim(result) == 0 else result

    @cached_property
    def commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def identityElement(self) -> int | None:
        xs = self.field.elements()
        rowsOk = np.all(self.table == xs[None, :], axis=1)
        colsOk = np.all(self.table == xs[:, None], axis=0)
        found = np.flatnonzero(rowsOk & colsOk)
        return int(found[0]) if found.size else None

    @property
    def hasIdentity(self) -> bool:
        return self.identityElement is not None

    def __repr__(self):
        return f"PreSemifield({self.ruleTag} over {self.field})"


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------

def _distributivityWitness(S: PreSemifield, xs, ys, zs) -> tuple | None:
    F = S.field
    left = S.mul(xs, F.add(ys, zs)) != F.add(S.mul(xs, ys), S.mul(xs, zs))
    right = S.mul(F.add(xs, ys), zs) != F.add(S.mul(xs, zs), S.mul(ys, zs))
    bad = np.flatnonzero(np.ravel(left | right))
    if bad.size == 0:
        return None
    i = bad[0]
    return (int(np.ravel(xs)[i]), int(np.ravel(ys)[i]), int(np.ravel(zs)[i]))


def checkAxioms(S: PreSemifield, samples: int = 20_000, seed: int = DEFAULT_SEED) -> AxiomReport:
    """S1 (additive group), S2 (both distributive laws), S3 (no zero divisors), S4 (identity)."""
    q = S.q
    table = S.table
    witnesses: dict[str, tuple] = {}

    # S1: the additive structure is that of GF(p^m); the product must stay inside it
    s1 = bool(table.min() >= 0 and table.max() < q)

    sampled = q > EXHAUSTIVE_TRIPLES_LIMIT
    witness = None
    if not sampled:
        ys, zs = np.meshgrid(S.field.elements(), S.field.elements(), indexing="ij")
        for x in range(q):
            witness = _distributivityWitness(S, np.full(ys.shape, x), ys, zs)
            if witness:
                break
    else:
        rng = np.random.default_rng(seed)
        xs, ys, zs = (rng.integers(0, q, samples) for _ in range(3))
        witness = _distributivityWitness(S, xs, ys, zs)
        logger.info(f"{S}: distributivity checked on {samples} random triples (seed {seed})")
    s2 = witness is None
    if witness:
        witnesses["S2"] = witness

    zeros = np.argwhere(table[1:, 1:] == 0)
    s3 = zeros.size == 0
    if not s3:
        witnesses["S3"] = (int(zeros[0][0]) + 1, int(zeros[0][1]) + 1)

    identity = S.identityElement
    return AxiomReport(s1=s1, s2=s2, s3=s3, s4=identity is not None, identity=identity,
                       witnesses=witnesses, sampled=sampled, seed=seed if sampled else None)


def rowsArePermutations(S: PreSemifield) -> bool:
    """Left and right multiplication by every nonzero element permutes the field."""
    expected = S.field.elements()
    rows = np.sort(S.table[1:, :], axis=1)
    cols = np.sort(S.table[:, 1:], axis=0)
    return bool(np.all(rows == expected[None, :]) and np.all(cols == expected[:, None]))


def requirePresemifield(S: PreSemifield) -> AxiomReport:
    report = checkAxioms(S)
    if not report.presemifield:
        failed = [name for name, ok in (("S1", report.s1), ("S2", report.s2), ("S3", report.s3)) if not ok]
        raise AxiomsFail(f"{S} fails {', '.join(failed)}: {report.witnesses}")
    return report


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def _warnUnlessAffineDO(f: PolyMap) -> list[str]:
    tag = classify(f).tag
    if tag == DOTag.GENERAL:
        message = f"{f!r} is not affine Dembowski-Ostrom; the product may violate the axioms"
        warnings.warn(message, NotAffineDO)
        logger.warning(message)
        return [message]
    return []


def presemifieldFromPlanarOdd(f: PolyMap) -> PreSemifield:
    """x o y = f(x+y) - f(x) - f(y) + f(0)."""
    F = f.field
    verdict = isPlanarOdd(f)
    if not verdict.planar:
        raise NotPlanar(f"{f!r} is not planar (a = {verdict.failingA})")
    notes = _warnUnlessAffineDO(f)
    values = f.table

    def rule(x, y):
        return F.add(F.sub(F.sub(values[F.add(x, y)], values[x]), values[y]), int(values[0]))

    return PreSemifield(F, rule, ProductRule.FROM_PLANAR_ODD, warnings=notes)


def presemifieldFromPlanarEven(f: PolyMap) -> PreSemifield:
    """x o y = f(x+y) + f(x) + f(y) + f(0) + xy."""
    F = f.field
    verdict = isPlanarEven(f)
    if not verdict.planar:
        raise NotPlanar(f"{f!r} is not planar (a = {verdict.failingA})")
    notes = _warnUnlessAffineDO(f)
    values = f.table

    def rule(x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return values[x ^ y] ^ values[x] ^ values[y] ^ int(values[0]) ^ np.asarray(F.mul(x, y))

    return PreSemifield(F, rule, ProductRule.FROM_PLANAR_EVEN, warnings=notes)


def toSemifield(S: PreSemifield, e: int | None = None) -> PreSemifield:
    """Isotope x*y = R^-1(x) o L^-1(y) with R(x) = x o e and L(y) = e o y.

    Then (x o e) * (e o y) = x o y and e o e is a two-sided identity.
    """
    requirePresemifield(S)
    e = 1 if e is None else int(e)
    if e == 0:
        raise ZeroElement("Identity repair needs a nonzero element e")
    right = S.table[:, e].copy()
    left = S.table[e, :].copy()
    rightInv = np.empty_like(right)
    rightInv[right] = np.arange(S.q)
    leftInv = np.empty_like(left)
    leftInv[left] = np.arange(S.q)

    table = S.table[rightInv[:, None], leftInv[None, :]]
    T = PreSemifield.fromTable(S.field, table)
    T.ruleTag = ProductRule.ISOTOPE
    T.isotopy = IsotopyWitness(F=right, G=left, H=np.arange(S.q, dtype=np.int64))
    expected = S.table[e, e]
    if T.identityElement != expected:
        raise AxiomsFail(f"Isotope of {S} with e={e} has identity {T.identityElement}, expected {expected}")
    logger.debug(f"{S}: identity repair with e={e}, identity {expected}")
    return T


def opposite(S: PreSemifield) -> PreSemifield:
    """x * y = y o x."""
    T = PreSemifield.fromTable(S.field, S.table.T.copy())
    T.ruleTag = ProductRule.OPPOSITE
    return T


def diagonal(S: PreSemifield) -> PolyMap:
    """The map x -> x o x."""
    xs = S.field.elements()
    return PolyMap.fromTable(S.field, S.table[xs, xs])


# ---------------------------------------------------------------------------
# Spreads
# ---------------------------------------------------------------------------

@dataclass
class Spread:
    p: int
    n: int                  # each subspace has dimension n inside GF(p)^(2n)
    subspaces: list         # q+1 basis matrices of shape (n, 2n)

    def verify(self) -> bool:
        """Count, dimensions, and pairwise trivial intersections by exact GF(p) rank."""
        GF = galois.GF(self.p)
        if len(self.subspaces) != self.p ** self.n + 1:
            return False
        bases = [GF(np.asarray(b, dtype=np.int64)) for b in self.subspaces]
        for b in bases:
            if np.linalg.matrix_rank(b) != self.n:
                return False
        for i in range(len(bases)):
            for j in range(i + 1, len(bases)):
                if np.linalg.matrix_rank(np.vstack([bases[i], bases[j]])) != 2 * self.n:
                    logger.debug(f"Spread subspaces {i} and {j} intersect")
                    return False
        return True


def spreadFromSemifield(S: PreSemifield) -> Spread:
    """{(x, m o x)} for every m, together with {(0, x)}."""
    if S.q > MAX_SPREAD_ORDER:
        raise TooLarge(f"Spreads are limited to q <= {MAX_SPREAD_ORDER}, got {S.q}")
    report = checkAxioms(S)
    if not report.semifield:
        raise AxiomsFail(f"{S} is not a semifield: {report.toDict()}")
    F = S.field
    n = F.m
    basis = np.array([F.p ** i for i in range(n)], dtype=np.int64)
    digits = F.digits
    subspaces = []
    for m in range(S.q):
        images = np.asarray(S.mul(m, basis))
        subspaces.append(np.hstack([digits[basis], digits[images]]))
    subspaces.append(np.hstack([np.zeros((n, n), dtype=np.int64), digits[basis]]))
    return Spread(p=F.p, n=n, subspaces=subspaces)
