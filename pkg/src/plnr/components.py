"""Boolean component functions: Walsh and nega-Hadamard spectra, bent and negabent
tests, the counting criterion, and the difference sets they correspond to."""
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import galois
import numpy as np

from .common import (
    CountingFails,
    DegenerateSplit,
    InvariantBreach,
    NotDifferenceSet,
    NotSymmetric,
    RdsVerdict,
    WrongLength,
)
from .groups import (
    BilinearForm,
    CocycleGroup,
    ProductGroup,
    homomorphismFromGenerators,
    parity,
    toCodes,
)
from .kernels import firstUnbalancedShift
from .rds import (
    RelativeDifferenceSet,
    componentFunction,
    forbiddenHyperplane,
    projectRds,
    relativeDifferenceSet,
    verifyRds,
)
from .workers import firstFailure

logger = logging.getLogger(__name__)


class BooleanFunction:
    """f: GF(2)^m -> GF(2) as a truth table; x is a bitmask with x_(i+1) in bit i."""

    def __init__(self, m: int, table):
        table = np.asarray(table, dtype=np.uint8)
        if m < 1:
            raise ValueError(f"Arity must be positive, got {m}")
        if table.shape != (1 << m,):
            raise WrongLength(f"Truth table of arity {m} needs {1 << m} entries, got {table.size}")
        if np.any(table > 1):
            raise ValueError("Truth table entries must be 0 or 1")
        self.m = m
        self.table = table

    @classmethod
    def zero(cls, m: int) -> "BooleanFunction":
        return cls(m, np.zeros(1 << m, dtype=np.uint8))

    @classmethod
    def fromMonomials(cls, m: int, monomials: Iterable[Sequence[int]]) -> "BooleanFunction":
        """Sum of products of variables; variable indices are bit positions."""
        xs = np.arange(1 << m, dtype=np.int64)
        table = np.zeros(1 << m, dtype=np.uint8)
        for monomial in monomials:
            mask = sum(1 << int(i) for i in monomial)
            table ^= ((xs & mask) == mask).astype(np.uint8)
        return cls(m, table)

    @property
    def signs(self) -> np.ndarray:
        return 1 - 2 * self.table.astype(np.int64)

    def __eq__(self, other):
        return isinstance(other, BooleanFunction) and other.m == self.m and np.array_equal(other.table, self.table)

    def __hash__(self):
        return hash((self.m, self.table.tobytes()))

    def __repr__(self):
        return f"BooleanFunction(m={self.m}, weight={int(self.table.sum())})"


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __str__(self):
        return f"{self.re}{self.im:+d}i"


# ---------------------------------------------------------------------------
# Spectra
# ---------------------------------------------------------------------------

def walsh(f: BooleanFunction, a: int) -> int:
    """sum_x (-1)^(<a,x> + f(x))."""
    xs = np.arange(1 << f.m, dtype=np.int64)
    return int(np.sum(f.signs * (1 - 2 * parity(xs & int(a)))))


def walshSpectrum(f: BooleanFunction) -> np.ndarray:
    """Every Walsh value at once by the fast Hadamard butterfly."""
    values = f.signs.copy()
    h = 1
    while h < values.size:
        view = values.reshape(-1, 2, h)
        u = view[:, 0, :].copy()
        v = view[:, 1, :]
        view[:, 0, :] = u + v
        view[:, 1, :] = u - v
        h <<= 1
    return values


def isBent(f: BooleanFunction) -> bool:
    if f.m % 2:
        return False
    return bool(np.all(np.abs(walshSpectrum(f)) == 1 << (f.m // 2)))


_QUARTER_TURNS = (GaussianInt(1, 0), GaussianInt(0, 1), GaussianInt(-1, 0), GaussianInt(0, -1))


def negaSpectrumValue(f: BooleanFunction, a: int) -> GaussianInt:
    """sum_x (-1)^(<a,x> + f(x)) i^w(x), w the Hamming weight."""
    xs = np.arange(1 << f.m, dtype=np.int64)
    signs = f.signs * (1 - 2 * parity(xs & int(a)))
    turns = np.bitwise_count(xs).astype(np.int64) % 4
    total = GaussianInt(0, 0)
    for t, unit in enumerate(_QUARTER_TURNS):
        s = int(signs[turns == t].sum())
        total = total + unit * GaussianInt(s, 0)
    return total


def negaSpectrum(f: BooleanFunction) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of every nega-Hadamard value.

    Coordinate by coordinate, the pair (u, v) at x_i = 0, 1 becomes
    (u + i v, u - i v) at a_i = 0, 1.
    """
    re = f.signs.copy()
    im = np.zeros_like(re)
    h = 1
    while h < re.size:
        r = re.reshape(-1, 2, h)
        c = im.reshape(-1, 2, h)
        ur, ui = r[:, 0, :].copy(), c[:, 0, :].copy()
        vr, vi = r[:, 1, :].copy(), c[:, 1, :].copy()
        r[:, 0, :], c[:, 0, :] = ur - vi, ui + vr
        r[:, 1, :], c[:, 1, :] = ur + vi, ui - vr
        h <<= 1
    return re, im


def isNegabent(f: BooleanFunction) -> bool:
    re, im = negaSpectrum(f)
    return bool(np.all(re * re + im * im == 1 << f.m))


# ---------------------------------------------------------------------------
# Counting criterion and the matching difference sets
# ---------------------------------------------------------------------------

def _checkForm(f: BooleanFunction, B: BilinearForm) -> None:
    if B.m != f.m:
        raise ValueError(f"Form lives on GF(2)^{B.m}, function on GF(2)^{f.m}")
    if not B.isSymmetric():
        raise NotSymmetric(f"{B} is not symmetric")


def verifyCounting(f: BooleanFunction, B: BilinearForm, threads: int | None = None) -> bool:
    """f(x+a) + f(x) + B(a,x) = b has 2^(m-1) solutions for every a != 0 and b."""
    _checkForm(f, B)
    failing = firstFailure(firstUnbalancedShift, (f.table, B.table), 1, 1 << f.m, threads)
    if failing >= 0:
        logger.debug(f"{f}: shift {failing} is unbalanced under {B}")
    return failing < 0


def _booleanGraph(f: BooleanFunction, B: BilinearForm) -> tuple[CocycleGroup, np.ndarray]:
    group = CocycleGroup.fromForm(B)
    xs = np.arange(1 << f.m, dtype=np.int64)
    return group, np.asarray(group.join(xs, f.table.astype(np.int64)))


def rdsFromBoolean(f: BooleanFunction, B: BilinearForm) -> RelativeDifferenceSet:
    """{(x, f(x))} in the group (x,y)*(x',y') = (x+x', y+y'+B(x,x'))."""
    if not verifyCounting(f, B):
        raise CountingFails(f"{f} fails the counting criterion for {B}")
    group, R = _booleanGraph(f, B)
    D = relativeDifferenceSet(group, group.forbiddenCodes(), R, source=f"boolean {f}")
    q = 1 << f.m
    if D.params != (q, 2, q, q // 2):
        raise InvariantBreach(f"Counting passed but the census gave {D.params}")
    D.function = f.table.astype(np.int64)
    return D


def tripleEquivalence(f: BooleanFunction) -> dict:
    """Negabent, counting and difference-set verdicts for the dot-product form."""
    B = BilinearForm.dot(f.m)
    group, R = _booleanGraph(f, B)
    verdicts = {
        "negabent": isNegabent(f),
        "counting": verifyCounting(f, B),
        "rds": verifyRds(group, group.forbiddenCodes(), R).ok,
    }
    verdicts["agree"] = len(set(verdicts.values())) == 1
    return verdicts


# ---------------------------------------------------------------------------
# Bent functions and ordinary difference sets
# ---------------------------------------------------------------------------

def binaryGroup(m: int) -> ProductGroup:
    """Z2^m; codes coincide with the bitmasks of GF(2)^m."""
    return ProductGroup([2] * m)


def bentSupportDifferenceSet(f: BooleanFunction) -> RelativeDifferenceSet:
    """The support of a bent function is a difference set in Z2^m."""
    if not isBent(f):
        raise NotDifferenceSet(f"{f} is not bent")
    G = binaryGroup(f.m)
    return relativeDifferenceSet(G, [G.identityCode], np.flatnonzero(f.table), source=f"support of {f}")


@dataclass
class FourBlockSet:
    group: ProductGroup
    forbidden: np.ndarray
    R: np.ndarray
    verdict: RdsVerdict

    def toRds(self) -> RelativeDifferenceSet:
        if not self.verdict.ok:
            raise InvariantBreach(f"Four-block set in {self.group.spec} is not a relative difference set")
        return RelativeDifferenceSet(group=self.group, forbidden=self.forbidden, R=self.R,
                                     params=self.verdict.params, source="four-block")


def _requireDifferenceSet(G: ProductGroup, S, name: str) -> np.ndarray:
    codes = np.unique(toCodes(G, S))
    verdict = verifyRds(G, [G.identityCode], codes)
    if not verdict.ok:
        raise NotDifferenceSet(f"{name} is not a difference set in {G.spec}: {verdict.violations}")
    return codes


def rdsFromTwoDifferenceSets(G: ProductGroup, D, E) -> FourBlockSet:
    """{0}xD + {1}xE + {2}x(G-D) + {3}x(G-E) in Z4 x G, relative to 2Z4 x {0}.

    The census decides the verdict; degenerate inputs give a set that fails it.
    """
    D = _requireDifferenceSet(G, D, "D")
    E = _requireDifferenceSet(G, E, "E")
    ambient = ProductGroup((4,) + G.cyclicOrders)
    everyone = G.codes()
    blocks = (D, E, np.setdiff1d(everyone, D), np.setdiff1d(everyone, E))
    R = np.sort(np.concatenate([z + 4 * block for z, block in enumerate(blocks)]))
    forbidden = np.array([0, 2], dtype=np.int64)
    verdict = verifyRds(ambient, forbidden, R)
    expected = (2 * G.order, 2, 2 * G.order, G.order)
    if verdict.ok and verdict.params != expected:
        raise InvariantBreach(f"Four-block set verified with {verdict.params}, expected {expected}")
    logger.debug(f"Four-block set in {ambient.spec}: {verdict.toDict()}")
    return FourBlockSet(group=ambient, forbidden=forbidden, R=R, verdict=verdict)


def z4ProductIsomorphism(m: int) -> tuple[ProductGroup, CocycleGroup, np.ndarray]:
    """Z4 x Z2^m -> the dot-form group on GF(2)^(m+1).

    The Z4 generator goes to (e1, 0), which squares to (0, 1); the i-th Z2
    generator goes to (e1 + e_(i+1), 0), an involution.
    """
    source = ProductGroup([4] + [2] * m)
    target = CocycleGroup.fromForm(BilinearForm.dot(m + 1))
    images = [target.join(1, 0)] + [target.join(1 | (1 << i), 0) for i in range(1, m + 1)]
    mapping = homomorphismFromGenerators(source, target, images)
    if np.unique(mapping).size != target.order:
        raise InvariantBreach(f"{source.spec} -> {target.spec} is not bijective")
    return source, target, mapping


def negabentOfFourBlock(G: ProductGroup, D, E) -> tuple[BooleanFunction, dict]:
    """Read the four-block set of two difference sets in Z2^m as a function on m+1 variables."""
    if any(n != 2 for n in G.cyclicOrders):
        raise ValueError(f"{G.spec} is not an elementary abelian 2-group")
    block = rdsFromTwoDifferenceSets(G, D, E)
    _, target, mapping = z4ProductIsomorphism(len(G.cyclicOrders))
    xs, ys = target.split(mapping[block.R])
    if np.unique(xs).size != target.base.q:
        raise InvariantBreach("Four-block set does not meet every coset of the forbidden subgroup once")
    table = np.zeros(target.base.q, dtype=np.uint8)
    table[xs] = ys
    h = BooleanFunction(target.base.m, table)
    report = {"rds": block.verdict.toDict()} | tripleEquivalence(h)
    return h, report


# ---------------------------------------------------------------------------
# Components of planar functions in characteristic 2
# ---------------------------------------------------------------------------

def orthonormalBasis(form: BilinearForm) -> list[int] | None:
    """Vectors v_1..v_m with B(v_i, v_j) = [i == j], or None when none exists."""
    GF2 = galois.GF(2)
    if np.linalg.matrix_rank(GF2(form.matrix.astype(np.int64))) != form.m:
        return None

    def extend(space: np.ndarray, chosen: list[int]) -> list[int] | None:
        if len(chosen) == form.m:
            return chosen
        norms = np.asarray(form.evaluate(space, space))
        for v in space[norms == 1]:
            rest = space[np.asarray(form.evaluate(int(v), space)) == 0]
            found = extend(rest, chosen + [int(v)])
            if found:
                return found
        return None

    return extend(np.arange(1 << form.m, dtype=np.int64), [])


def standardForm(g: BooleanFunction, basis: Sequence[int]) -> BooleanFunction:
    """h(x) = g(Mx), M sending the i-th unit vector to basis[i]."""
    xs = np.arange(1 << g.m, dtype=np.int64)
    images = np.zeros_like(xs)
    for i, v in enumerate(basis):
        images ^= np.where((xs >> i) & 1, int(v), 0)
    return BooleanFunction(g.m, g.table[images])


def negabentFromProjection(D: RelativeDifferenceSet, c: int) -> tuple[BooleanFunction, dict]:
    """Project a (2^m,2^m,2^m,1) set {(x, f(x))} onto N / ker Tr(c*y) and read the
    boolean component Tr(c*f(x)) in the dot-product coordinates."""
    group = D.group
    if not isinstance(group, CocycleGroup) or group.target.p != 2 or group.kind != "product":
        raise ValueError(f"{group.spec} is not the characteristic 2 field-product group")
    F = group.target
    if int(c) == 0:
        raise DegenerateSplit("c = 0 projects onto the whole forbidden subgroup")

    projected = projectRds(D, forbiddenHyperplane(D, c))
    g = BooleanFunction(F.m, componentFunction(D, c))
    B = BilinearForm.fromTrace(F, int(c))
    counting = verifyCounting(g, B)
    basis = orthonormalBasis(B)
    if basis is None:
        raise DegenerateSplit(f"Trace form for c = {c} has no orthonormal basis")
    h = standardForm(g, basis)
    negabent = isNegabent(h)
    if counting != negabent:
        raise InvariantBreach(f"Counting ({counting}) and negabent ({negabent}) disagree for c = {c}")
    report = {
        "c": int(c),
        "projected": list(projected.params),
        "counting": counting,
        "negabent": negabent,
        "basis": basis,
    }
    return h, report
