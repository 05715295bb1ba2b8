"""Exact arithmetic in GF(p^m).

Elements are encoded as integers in [0, q): the base-p digits of an encoding,
least significant first, are the coefficients of a polynomial in x reduced
modulo the field's irreducible modulus. For p = 2 the encoding is a bitmask and
addition is exclusive-or.

All arithmetic entry points on FiniteField accept Python ints or numpy integer
arrays and broadcast like numpy ufuncs; scalar inputs give int results.
"""
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .common import (
    DivisionByZero,
    EVEN_LOG_TABLE_LIMIT,
    FieldMismatch,
    InvariantBreach,
    MAX_FIELD_ORDER,
    NonPrime,
    NotADivisor,
    ODD_LOG_TABLE_LIMIT,
    ReducibleModulus,
    TooLarge,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Polynomials over GF(p) as coefficient lists, lowest degree first
# ---------------------------------------------------------------------------

def isPrime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def polyRem(num: Sequence[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of num modulo the monic polynomial den over GF(p)."""
    rem = [c % p for c in num]
    dd = len(den) - 1
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c:
            for j in range(dd + 1):
                rem[i - dd + j] = (rem[i - dd + j] - c * den[j]) % p
    rem = rem[:dd]
    return rem + [0] * (dd - len(rem))


def isIrreducible(p: int, coeffs: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(coeffs) - 1
    for d in range(1, deg // 2 + 1):
        for idx in range(p ** d):
            divisor = [(idx // p ** i) % p for i in range(d)] + [1]
            if not any(polyRem(coeffs, divisor, p)):
                return False
    return True


def smallestIrreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m, comparing c0 first."""
    for idx in range(p ** m):
        coeffs = [(idx // p ** (m - 1 - i)) % p for i in range(m)] + [1]
        if isIrreducible(p, coeffs):
            return tuple(coeffs)
    raise InvariantBreach(f"No irreducible polynomial of degree {m} over GF({p})")


def _unwrap(result: np.ndarray):
    return int(result) if result.ndim == 0 else result


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------

class FiniteField:
    def __init__(self, p: int, m: int, modulus: Sequence[int]):
        self.p: int = p
        self.m: int = m
        self.modulus: tuple[int, ...] = tuple(int(c) for c in modulus)
        self.q: int = p ** m

        self._weights = p ** np.arange(m, dtype=np.int64)
        self._modMask = sum(c << i for i, c in enumerate(self.modulus)) if p == 2 else 0

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.m}/" + ",".join(str(c) for c in self.modulus)

    def __eq__(self, other):
        if isinstance(other, FiniteField):
            return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)
        return False

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"FiniteField({self.spec})"

    def __str__(self):
        return f"GF({self.p}^{self.m})"

    @property
    def usesTables(self) -> bool:
        if self.p == 2:
            return self.q <= EVEN_LOG_TABLE_LIMIT
        return self.q <= ODD_LOG_TABLE_LIMIT

    @property
    def weights(self) -> np.ndarray:
        """Place values p^i of the digits."""
        return self._weights

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def element(self, value: int) -> "FieldElement":
        return FieldElement(int(value), self)

    @cached_property
    def digits(self) -> np.ndarray:
        """(q, m) array of base-p digits of every encoding."""
        codes = np.arange(self.q, dtype=np.int64)
        return (codes[:, None] // self._weights[None, :]) % self.p

    def fromDigits(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) * self._weights).sum(axis=-1)

    # ------------------------------------------------------------------
    # Scalar polynomial arithmetic (table construction and large fields)
    # ------------------------------------------------------------------

    def _mulScalar(self, a: int, b: int) -> int:
        a, b = int(a), int(b)
        if self.m == 1:
            return a * b % self.p
        if self.p == 2:
            result = 0
            top = 1 << self.m
            while b:
                if b & 1:
                    result ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= self._modMask
            return result
        p, m = self.p, self.m
        da = [(a // p ** i) % p for i in range(m)]
        db = [(b // p ** i) % p for i in range(m)]
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        rem = polyRem(prod, self.modulus, p)
        return sum(c * p ** i for i, c in enumerate(rem))

    def _powScalar(self, a: int, e: int) -> int:
        result, base = 1, int(a)
        while e:
            if e & 1:
                result = self._mulScalar(result, base)
            base = self._mulScalar(base, base)
            e >>= 1
        return result

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, int]:
        q = self.q
        if not self.usesTables:
            raise TooLarge(f"No log tables for {self}: q={q} above the table limit")
        if q == 2:
            return np.zeros(2, dtype=np.int64), np.ones(2, dtype=np.int64), 1
        for g in range(2, q):
            powers = np.empty(q - 1, dtype=np.int64)
            x = 1
            for i in range(q - 1):
                powers[i] = x
                x = self._mulScalar(x, g)
                if x == 1:
                    break
            if x == 1 and i == q - 2:
                log = np.zeros(q, dtype=np.int64)
                log[powers] = np.arange(q - 1, dtype=np.int64)
                logger.debug(f"{self}: log tables built with generator {g}")
                return log, np.concatenate([powers, powers]), g
        raise InvariantBreach(f"{self!r} has no primitive element; modulus is not irreducible")

    @property
    def logTable(self) -> np.ndarray:
        return self._tables[0]

    @property
    def expTable(self) -> np.ndarray:
        """Antilog table of length 2(q-1), so log sums need no reduction."""
        return self._tables[1]

    @property
    def generator(self) -> int:
        return self._tables[2]

    # ------------------------------------------------------------------
    # Vectorized arithmetic on encodings
    # ------------------------------------------------------------------

    def add(self, a, b):
        x = np.asarray(a, dtype=np.int64)
        y = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            r = x ^ y
        elif self.m == 1:
            r = (x + y) % self.p
        else:
            r = self.fromDigits((self.digits[x] + self.digits[y]) % self.p)
        return _unwrap(r)

    def neg(self, a):
        x = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            r = x
        elif self.m == 1:
            r = (-x) % self.p
        else:
            r = self.fromDigits((-self.digits[x]) % self.p)
        return _unwrap(r)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def sum(self, values) -> int:
        """Field sum of all entries of an encoding array."""
        x = np.asarray(values, dtype=np.int64).ravel()
        if x.size == 0:
            return 0
        if self.p == 2:
            return int(np.bitwise_xor.reduce(x))
        if self.m == 1:
            return int(x.sum() % self.p)
        return int(self.fromDigits(self.digits[x].sum(axis=0) % self.p))

    def mul(self, a, b):
        x = np.asarray(a, dtype=np.int64)
        y = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            r = (x * y) % self.p
        elif self.usesTables:
            log, exp = self.logTable, self.expTable
            r = np.where((x == 0) | (y == 0), 0, exp[log[x] + log[y]])
        else:
            r = np.asarray(np.frompyfunc(self._mulScalar, 2, 1)(x, y), dtype=np.int64)
        return _unwrap(r)

    def inv(self, a):
        x = np.asarray(a, dtype=np.int64)
        if np.any(x == 0):
            raise DivisionByZero(f"Inverse of 0 in {self}")
        if self.usesTables:
            r = self.expTable[(self.q - 1 - self.logTable[x]) % (self.q - 1)]
            return _unwrap(np.asarray(r))
        return self.power(x, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        e = int(e)
        if e < 0:
            return self.power(self.inv(a), -e)
        x = np.asarray(a, dtype=np.int64)
        if e == 0:
            return _unwrap(np.ones_like(x))
        if self.usesTables:
            reduced = e % (self.q - 1) or (self.q - 1)
            r = np.where(x == 0, 0, self.expTable[(self.logTable[x] * reduced) % (self.q - 1)])
        else:
            r = np.asarray(np.frompyfunc(lambda v: self._powScalar(v, e), 1, 1)(x), dtype=np.int64)
        return _unwrap(np.asarray(r))

    def frobenius(self, a, k: int = 1):
        """x -> x^(p^k)."""
        return self.power(a, self.p ** (k % self.m))

    def relTrace(self, a, subfieldDegree: int):
        """Trace from GF(p^m) down to GF(p^s), s = subfieldDegree."""
        s = int(subfieldDegree)
        if s < 1 or self.m % s:
            raise NotADivisor(f"{s} does not divide the extension degree {self.m}")
        acc = np.asarray(a, dtype=np.int64)
        current = acc
        for _ in range(self.m // s - 1):
            current = np.asarray(self.power(current, self.p ** s))
            acc = np.asarray(self.add(acc, current))
        return _unwrap(acc)

    def trace(self, a):
        """Absolute trace; values are prime-field encodings in [0, p)."""
        return self.relTrace(a, 1)

    def inSubfield(self, a, subfieldDegree: int):
        x = np.asarray(a, dtype=np.int64)
        return _unwrap(np.asarray(self.power(x, self.p ** subfieldDegree)) == x)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FiniteField

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"Encoding {self.value} out of range for {self.field}")

    def _other(self, other: "FieldElement") -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"Cannot combine a field element with {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"Elements of {self.field!r} and {other.field!r} do not mix")
        return other.value

    def __add__(self, other):
        return FieldElement(self.field.add(self.value, self._other(other)), self.field)

    def __sub__(self, other):
        return FieldElement(self.field.sub(self.value, self._other(other)), self.field)

    def __mul__(self, other):
        return FieldElement(self.field.mul(self.value, self._other(other)), self.field)

    def __truediv__(self, other):
        return FieldElement(self.field.div(self.value, self._other(other)), self.field)

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def __pow__(self, e: int):
        return FieldElement(self.field.power(self.value, e), self.field)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value}@GF({self.field.q})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.field.inv(a.value), a.field)


def power(a: FieldElement, e: int) -> FieldElement:
    return a ** e


def relTrace(K: FiniteField, subfieldDegree: int, x: FieldElement) -> FieldElement:
    if x.field != K:
        raise FieldMismatch(f"{x!r} is not an element of {K!r}")
    return FieldElement(K.relTrace(x.value, subfieldDegree), K)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _cachedField(p: int, m: int, modulus: tuple[int, ...] | None) -> FiniteField:
    if not isPrime(p):
        raise NonPrime(f"{p} is not prime")
    if m < 1:
        raise ValueError(f"Extension degree must be positive, got {m}")
    if p ** m > MAX_FIELD_ORDER:
        raise TooLarge(f"GF({p}^{m}) exceeds the supported order {MAX_FIELD_ORDER}")

    if modulus is None:
        modulus = smallestIrreducible(p, m)
        logger.debug(f"GF({p}^{m}): default modulus {modulus}")
    else:
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError(f"Modulus {list(modulus)} is not monic of degree {m}")
        if any(not 0 <= c < p for c in modulus):
            raise ValueError(f"Modulus {list(modulus)} has coefficients outside GF({p})")
        if not isIrreducible(p, modulus):
            raise ReducibleModulus(f"Modulus {list(modulus)} is reducible over GF({p})")
    return FiniteField(p, m, modulus)


def makeField(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Field context for GF(p^m); shared per (p, m, modulus)."""
    return _cachedField(int(p), int(m), None if modulus is None else tuple(int(c) for c in modulus))
