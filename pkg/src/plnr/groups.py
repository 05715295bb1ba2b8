"""Finite groups on integer codes.

Every group numbers its elements 0..order-1 with the identity at code 0 and
exposes vectorized opCodes / invCodes on numpy code arrays. GroupElement is the
value-object view used at the API boundary; bulk work (difference counting,
closures, censuses, coset enumeration) stays on code arrays.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .common import (
    COMMUTATIVITY_SCAN_LIMIT,
    GroupMismatch,
    InvariantBreach,
    MAX_CENSUS_ORDER,
    MAX_QUOTIENT_ORDER,
    NotASubgroup,
    TooLarge,
)
from .gf import FiniteField, makeField

logger = logging.getLogger(__name__)


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def primeFactors(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _unwrap(result):
    result = np.asarray(result)
    return int(result) if result.ndim == 0 else result


# ---------------------------------------------------------------------------
# GF(2)^m and bilinear forms on it
# ---------------------------------------------------------------------------

class BinaryVectorSpace:
    """GF(2)^m with vectors as bitmasks; coordinate i is bit i."""

    def __init__(self, m: int):
        self.m = m
        self.q = 1 << m

    @property
    def spec(self) -> str:
        return f"2^{self.m}"

    def add(self, a, b):
        return _unwrap(np.asarray(a, dtype=np.int64) ^ np.asarray(b, dtype=np.int64))

    def neg(self, a):
        return _unwrap(np.asarray(a, dtype=np.int64))

    def __eq__(self, other):
        return isinstance(other, BinaryVectorSpace) and other.m == self.m

    def __hash__(self):
        return hash(("GF2^", self.m))


def parity(values) -> np.ndarray:
    return (np.bitwise_count(np.asarray(values, dtype=np.int64)) & 1).astype(np.int64)


class BilinearForm:
    """B(x, y) = x^T M y over GF(2); rows[i] is row i of M as a bitmask."""

    def __init__(self, rows: Sequence[int], m: int | None = None):
        self.rows: tuple[int, ...] = tuple(int(r) for r in rows)
        self.m: int = len(self.rows) if m is None else m
        if len(self.rows) != self.m:
            raise ValueError(f"Form needs {self.m} rows, got {len(self.rows)}")
        if any(r < 0 or r >> self.m for r in self.rows):
            raise ValueError(f"Form rows {self.rows} do not fit GF(2)^{self.m}")

    @classmethod
    def dot(cls, m: int) -> "BilinearForm":
        return cls([1 << i for i in range(m)], m)

    @classmethod
    def zero(cls, m: int) -> "BilinearForm":
        return cls([0] * m, m)

    @classmethod
    def fromMatrix(cls, matrix) -> "BilinearForm":
        mat = np.asarray(matrix, dtype=np.int64) % 2
        return cls([int(sum(int(v) << j for j, v in enumerate(row))) for row in mat], mat.shape[0])

    @classmethod
    def fromTrace(cls, field: FiniteField, c: int) -> "BilinearForm":
        """B(x, y) = Tr(c*x*y) on the bit coordinates of GF(2^m) encodings."""
        if field.p != 2:
            raise ValueError(f"Trace forms need characteristic 2, got {field}")
        basis = np.array([1 << i for i in range(field.m)], dtype=np.int64)
        products = field.mul(c, field.mul(basis[:, None], basis[None, :]))
        return cls.fromMatrix(np.asarray(field.trace(products)))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[(r >> j) & 1 for j in range(self.m)] for r in self.rows], dtype=np.uint8)

    @property
    def spec(self) -> str:
        return "form=" + ",".join(f"{r:x}" for r in self.rows)

    def isSymmetric(self) -> bool:
        mat = self.matrix
        return bool(np.array_equal(mat, mat.T))

    def evaluate(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        image = np.zeros(y.shape, dtype=np.int64)
        for i, row in enumerate(self.rows):
            image |= parity(y & row) << i
        return _unwrap(parity(x & image))

    @cached_property
    def table(self) -> np.ndarray:
        """(2^m, 2^m) uint8 table of B."""
        xs = np.arange(1 << self.m, dtype=np.int64)
        return np.asarray(self.evaluate(xs[:, None], xs[None, :]), dtype=np.uint8)

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and other.rows == self.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"BilinearForm({self.spec})"


def isAlternating(form: BilinearForm, dimension: int) -> bool:
    """True iff B(x, x) = 0 for every x in GF(2)^dimension."""
    if form.m != dimension:
        raise ValueError(f"Form is defined on GF(2)^{form.m}, not GF(2)^{dimension}")
    xs = np.arange(1 << dimension, dtype=np.int64)
    return bool(np.all(np.asarray(form.evaluate(xs, xs)) == 0))


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    group: "FiniteGroup"
    code: int

    @property
    def value(self) -> tuple:
        return self.group.decode(self.code)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return op(self, other)

    def __repr__(self):
        return self.group.formatCode(self.code)


class FiniteGroup(ABC):
    order: int
    identityCode: int = 0

    @property
    @abstractmethod
    def spec(self) -> str: ...

    @abstractmethod
    def opCodes(self, a, b): ...

    @abstractmethod
    def invCodes(self, a): ...

    @abstractmethod
    def decode(self, code: int) -> tuple: ...

    @abstractmethod
    def encode(self, value: Sequence[int]) -> int: ...

    def formatCode(self, code: int) -> str:
        return "(" + ",".join(str(v) for v in self.decode(int(code))) + ")"

    def codes(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def element(self, value) -> GroupElement:
        if isinstance(value, (int, np.integer)):
            code = int(value)
            if not 0 <= code < self.order:
                raise ValueError(f"Code {code} out of range for {self.spec}")
            return GroupElement(self, code)
        return GroupElement(self, self.encode(value))

    def identity(self) -> GroupElement:
        return GroupElement(self, self.identityCode)

    def powCodes(self, a, e):
        """a^e elementwise; e may be an int or an array broadcastable with a."""
        base = np.asarray(a, dtype=np.int64)
        exps = np.asarray(e, dtype=np.int64)
        base, exps = np.broadcast_arrays(base, exps)
        base = base.copy()
        exps = exps.copy()
        result = np.full(base.shape, self.identityCode, dtype=np.int64)
        while np.any(exps):
            odd = (exps & 1).astype(bool)
            if np.any(odd):
                result = np.where(odd, self.opCodes(result, base), result)
            exps >>= 1
            if np.any(exps):
                base = np.asarray(self.opCodes(base, base))
        return _unwrap(result)

    @cached_property
    def isAbelian(self) -> bool:
        if self.order > COMMUTATIVITY_SCAN_LIMIT:
            raise TooLarge(f"Commutativity scan of {self.spec} (order {self.order}) is not supported")
        codes = self.codes()
        for start in range(0, self.order, 256):
            rows = codes[start:start + 256, None]
            if not np.array_equal(self.opCodes(rows, codes[None, :]), self.opCodes(codes[None, :], rows)):
                return False
        return True

    def __repr__(self):
        return f"{type(self).__name__}({self.spec})"


class ProductGroup(FiniteGroup):
    """Z_{n1} x Z_{n2} x ... with mixed-radix codes, first factor least significant."""

    def __init__(self, cyclicOrders: Sequence[int]):
        orders = tuple(int(n) for n in cyclicOrders)
        if not orders or any(n < 1 for n in orders):
            raise ValueError(f"Cyclic orders must be positive integers, got {list(cyclicOrders)}")
        self.cyclicOrders: tuple[int, ...] = orders
        self.order: int = int(np.prod(orders))
        self._orders = np.array(orders, dtype=np.int64)
        self._weights = np.concatenate([[1], np.cumprod(orders)[:-1]]).astype(np.int64)

    @property
    def spec(self) -> str:
        return "x".join(f"Z{n}" for n in self.cyclicOrders)

    def digitsOf(self, codes) -> np.ndarray:
        c = np.asarray(codes, dtype=np.int64)
        return (c[..., None] // self._weights) % self._orders

    def _fromDigits(self, digits: np.ndarray):
        return _unwrap((digits % self._orders * self._weights).sum(axis=-1))

    def opCodes(self, a, b):
        return self._fromDigits(self.digitsOf(a) + self.digitsOf(b))

    def invCodes(self, a):
        return self._fromDigits(-self.digitsOf(a))

    def decode(self, code: int) -> tuple:
        return tuple(int(v) for v in self.digitsOf(int(code)))

    def encode(self, value: Sequence[int]) -> int:
        value = tuple(value)
        if len(value) != len(self.cyclicOrders):
            raise ValueError(f"{self.spec} elements have {len(self.cyclicOrders)} components, got {value}")
        return int(self._fromDigits(np.array(value, dtype=np.int64)))

    def formatCode(self, code: int) -> str:
        if len(self.cyclicOrders) == 1:
            return str(int(code))
        return super().formatCode(code)

    @cached_property
    def isAbelian(self) -> bool:
        return True

    def __eq__(self, other):
        return isinstance(other, ProductGroup) and other.cyclicOrders == self.cyclicOrders

    def __hash__(self):
        return hash(self.cyclicOrders)


def zeroCocycle(x, y):
    return _unwrap(np.zeros(np.broadcast_shapes(np.shape(x), np.shape(y)), dtype=np.int64))


class CocycleGroup(FiniteGroup):
    """Pairs (x, y) with (x,y)*(x',y') = (x+x', y+y'+beta(x,x')).

    beta must be biadditive; it is a vectorized callable on encodings of the
    base space returning encodings of the target field. Codes are x*|target| + y,
    so the subgroup N = {(0, y)} is exactly the codes 0..|target|-1.
    """

    def __init__(self, base, target: FiniteField, beta: Callable, kind: str,
                 form: BilinearForm | None = None):
        self.base = base
        self.target: FiniteField = target
        self.beta: Callable = beta
        self.kind: str = kind
        self.form: BilinearForm | None = form
        self.order: int = base.q * target.q

    @classmethod
    def fieldProduct(cls, field: FiniteField) -> "CocycleGroup":
        return cls(field, field, field.mul, "product")

    @classmethod
    def directProduct(cls, field: FiniteField) -> "CocycleGroup":
        return cls(field, field, zeroCocycle, "zero")

    @classmethod
    def fromForm(cls, form: BilinearForm) -> "CocycleGroup":
        return cls(BinaryVectorSpace(form.m), makeField(2, 1), form.evaluate, form.spec, form=form)

    @classmethod
    def fromSemifield(cls, semifield) -> "CocycleGroup":
        return cls(semifield.field, semifield.field, semifield.mul, semifield.groupKind or "semifield")

    @property
    def spec(self) -> str:
        return f"cocycle:{self.base.spec}:{self.kind}"

    def split(self, codes):
        return np.divmod(np.asarray(codes, dtype=np.int64), self.target.q)

    def join(self, x, y):
        return _unwrap(np.asarray(x, dtype=np.int64) * self.target.q + np.asarray(y, dtype=np.int64))

    def opCodes(self, a, b):
        xa, ya = self.split(a)
        xb, yb = self.split(b)
        x = self.base.add(xa, xb)
        y = self.target.add(self.target.add(ya, yb), self.beta(xa, xb))
        return self.join(x, y)

    def invCodes(self, a):
        x, y = self.split(a)
        return self.join(self.base.neg(x), self.target.add(self.target.neg(y), self.beta(x, x)))

    def decode(self, code: int) -> tuple:
        x, y = divmod(int(code), self.target.q)
        return (x, y)

    def encode(self, value: Sequence[int]) -> int:
        x, y = (int(v) for v in value)
        if not (0 <= x < self.base.q and 0 <= y < self.target.q):
            raise ValueError(f"({x},{y}) is not an element of {self.spec}")
        return x * self.target.q + y

    def forbiddenCodes(self) -> np.ndarray:
        """N = {(0, y)}."""
        return np.arange(self.target.q, dtype=np.int64)

    @cached_property
    def isAbelian(self) -> bool:
        xs = np.arange(self.base.q, dtype=np.int64)
        if self.base.q <= 1024:
            table = np.asarray(self.beta(xs[:, None], xs[None, :]))
            return bool(np.array_equal(table, table.T))
        rng = np.random.default_rng(0)
        a = rng.integers(0, self.base.q, 1 << 16)
        b = rng.integers(0, self.base.q, 1 << 16)
        logger.warning(f"{self.spec}: commutativity decided on 65536 sampled pairs")
        return bool(np.array_equal(self.beta(a, b), self.beta(b, a)))


class QuotientGroup(FiniteGroup):
    """G/U by coset enumeration; coset i is represented by its smallest code."""

    def __init__(self, parent: FiniteGroup, subgroup: np.ndarray, cosetOf: np.ndarray,
                 representatives: np.ndarray, generators: Sequence[int]):
        self.parent = parent
        self.subgroup = subgroup
        self.cosetOf = cosetOf
        self.representatives = representatives
        self.generators = tuple(int(g) for g in generators)
        self.order = len(representatives)

    @property
    def spec(self) -> str:
        gens = ",".join(self.parent.formatCode(g) for g in self.generators)
        return f"{self.parent.spec}/<{gens}>"

    def opCodes(self, a, b):
        reps = self.representatives
        return _unwrap(self.cosetOf[self.parent.opCodes(reps[np.asarray(a)], reps[np.asarray(b)])])

    def invCodes(self, a):
        return _unwrap(self.cosetOf[self.parent.invCodes(self.representatives[np.asarray(a)])])

    def decode(self, code: int) -> tuple:
        return self.parent.decode(int(self.representatives[int(code)]))

    def encode(self, value: Sequence[int]) -> int:
        return int(self.cosetOf[self.parent.encode(value)])

    def formatCode(self, code: int) -> str:
        return "[" + self.parent.formatCode(int(self.representatives[int(code)])) + "]"

    @cached_property
    def isAbelian(self) -> bool:
        if self.parent.isAbelian:
            return True
        return FiniteGroup.isAbelian.func(self)


@dataclass(frozen=True)
class Epimorphism:
    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray

    def __call__(self, x):
        if isinstance(x, GroupElement):
            return GroupElement(self.target, int(self.images[x.code]))
        return _unwrap(self.images[np.asarray(x, dtype=np.int64)])


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def _sameGroup(g: GroupElement, h: GroupElement) -> FiniteGroup:
    if g.group is not h.group and g.group.spec != h.group.spec:
        raise GroupMismatch(f"{g!r} in {g.group.spec} and {h!r} in {h.group.spec}")
    return g.group


def op(g: GroupElement, h: GroupElement) -> GroupElement:
    group = _sameGroup(g, h)
    return GroupElement(group, int(group.opCodes(g.code, h.code)))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.group, int(g.group.invCodes(g.code)))


def identity(group: FiniteGroup) -> GroupElement:
    return group.identity()


def toCodes(group: FiniteGroup, items: Iterable) -> np.ndarray:
    codes = []
    for item in items:
        if isinstance(item, GroupElement):
            if item.group is not group and item.group.spec != group.spec:
                raise GroupMismatch(f"{item!r} is not an element of {group.spec}")
            codes.append(item.code)
        elif isinstance(item, (int, np.integer)):
            codes.append(int(item))
        else:
            codes.append(group.encode(item))
    arr = np.array(codes, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= group.order):
        raise ValueError(f"Codes out of range for {group.spec}")
    return arr


def elementOrderCensus(group: FiniteGroup) -> dict[int, int]:
    """Map from element order to the number of elements of that order."""
    if group.order > MAX_CENSUS_ORDER:
        raise TooLarge(f"Census of {group.spec} (order {group.order}) exceeds {MAX_CENSUS_ORDER}")
    remaining = group.codes()
    orders = np.zeros(group.order, dtype=np.int64)
    for d in divisors(group.order):
        hit = np.asarray(group.powCodes(remaining, d)) == group.identityCode
        orders[remaining[hit]] = d
        remaining = remaining[~hit]
        if remaining.size == 0:
            break
    if remaining.size:
        raise InvariantBreach(f"{remaining.size} elements of {group.spec} have no order dividing {group.order}")
    values, counts = np.unique(orders, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def subgroupClosure(group: FiniteGroup, generators: Iterable) -> np.ndarray:
    """Sorted codes of the subgroup generated by the given elements."""
    gens = np.unique(toCodes(group, generators))
    mask = np.zeros(group.order, dtype=bool)
    mask[group.identityCode] = True
    frontier = np.array([group.identityCode], dtype=np.int64)
    while frontier.size and gens.size:
        new = np.asarray(group.opCodes(frontier[:, None], gens[None, :])).ravel()
        new = np.unique(new[~mask[new]])
        mask[new] = True
        frontier = new
    return np.flatnonzero(mask).astype(np.int64)


def isSubgroup(group: FiniteGroup, codes: Iterable) -> bool:
    members = np.unique(toCodes(group, codes))
    if group.identityCode not in members:
        return False
    mask = np.zeros(group.order, dtype=bool)
    mask[members] = True
    for start in range(0, members.size, 512):
        products = np.asarray(group.opCodes(members[start:start + 512, None], members[None, :]))
        if not mask[products].all():
            return False
    return bool(mask[np.asarray(group.invCodes(members))].all())


def quotientMap(group: FiniteGroup, subgroupGenerators: Iterable) -> tuple[QuotientGroup, Epimorphism]:
    """G/U for U generated by subgroupGenerators, with the canonical coset map."""
    if group.order > MAX_QUOTIENT_ORDER:
        raise TooLarge(f"Quotients of {group.spec} (order {group.order}) exceed {MAX_QUOTIENT_ORDER}")
    generators = np.unique(toCodes(group, subgroupGenerators))
    subgroup = subgroupClosure(group, generators)

    everyone = group.codes()
    inverses = np.asarray(group.invCodes(everyone))
    mask = np.zeros(group.order, dtype=bool)
    mask[subgroup] = True
    for u in generators:
        conjugates = np.asarray(group.opCodes(group.opCodes(everyone, u), inverses))
        if not mask[conjugates].all():
            raise NotASubgroup(f"<{group.formatCode(u)}> is not normal in {group.spec}")

    cosetOf = np.full(group.order, -1, dtype=np.int64)
    representatives = []
    for g in range(group.order):
        if cosetOf[g] >= 0:
            continue
        members = np.asarray(group.opCodes(subgroup, g))
        if np.any(cosetOf[members] >= 0):
            raise InvariantBreach(f"Cosets of {subgroup.size}-element subgroup overlap in {group.spec}")
        cosetOf[members] = len(representatives)
        representatives.append(g)

    quotient = QuotientGroup(group, subgroup, cosetOf, np.array(representatives, dtype=np.int64), generators)
    logger.debug(f"{group.spec} / |U|={subgroup.size} -> {quotient.order} cosets")
    return quotient, Epimorphism(group, quotient, cosetOf)


def abelianInvariants(group: FiniteGroup) -> list[int]:
    """Prime-power cyclic orders of an abelian group, ascending."""
    if not group.isAbelian:
        raise ValueError(f"{group.spec} is not abelian")
    census = elementOrderCensus(group)
    invariants: list[int] = []
    for p, a in primeFactors(group.order).items():
        ranks = []
        for k in range(a + 1):
            count = sum(c for o, c in census.items() if (p ** k) % o == 0)
            e = 0
            while p ** e < count:
                e += 1
            if p ** e != count:
                raise InvariantBreach(f"{count} elements of order dividing {p}^{k} in {group.spec}")
            ranks.append(e)
        atLeast = [ranks[k] - ranks[k - 1] for k in range(1, a + 1)] + [0]
        for k in range(1, a + 1):
            invariants += [p ** k] * (atLeast[k - 1] - atLeast[k])
    return sorted(invariants)


def homomorphismFromGenerators(source: ProductGroup, target: FiniteGroup, images: Sequence) -> np.ndarray:
    """Codes of the images of every source element under the map sending the i-th
    cyclic generator of source to images[i]."""
    imageCodes = toCodes(target, images)
    if imageCodes.size != len(source.cyclicOrders):
        raise ValueError(f"{source.spec} needs {len(source.cyclicOrders)} images, got {imageCodes.size}")
    for img, n in zip(imageCodes, source.cyclicOrders):
        if int(target.powCodes(int(img), n)) != target.identityCode:
            raise ValueError(f"{target.formatCode(img)} has order not dividing {n}; no homomorphism")
    digits = source.digitsOf(source.codes())
    result = np.full(source.order, target.identityCode, dtype=np.int64)
    for i, img in enumerate(imageCodes):
        powers = np.asarray(target.powCodes(np.full(source.order, img), digits[:, i]))
        result = np.asarray(target.opCodes(result, powers))
    return result
