"""Mappings GF(q) -> GF(q) as reduced polynomials and as value tables."""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np

from .common import DOTag, FieldMismatch, INTERPOLATION_LIMIT, TooLarge, WrongLength
from .gf import FieldElement, FiniteField

logger = logging.getLogger(__name__)


def reduceExponent(e: int, q: int) -> int:
    """Exponent of x^e modulo x^q - x, kept in [0, q-1]."""
    if e < 0:
        raise ValueError(f"Negative exponent {e}")
    return 0 if e == 0 else (e - 1) % (q - 1) + 1


class PolyMap:
    """A function on GF(q), known by its coefficients, its value table, or both.

    Whichever representation is missing is derived lazily: the table by summing
    monomial powers, the coefficients by Lagrange interpolation.
    """

    def __init__(self, field: FiniteField, terms: Mapping[int, int] | None = None,
                 table: np.ndarray | None = None):
        if terms is None and table is None:
            raise ValueError("PolyMap needs terms or a value table")
        self.field = field
        if terms is not None:
            reduced: dict[int, int] = {}
            for e, c in terms.items():
                c = int(c)
                if not 0 <= c < field.q:
                    raise ValueError(f"Coefficient {c} is not an element of {field}")
                r = reduceExponent(int(e), field.q)
                reduced[r] = field.add(reduced.get(r, 0), c)
            self._terms: dict[int, int] | None = {e: c for e, c in sorted(reduced.items()) if c}
        else:
            self._terms = None
        if table is not None:
            table = np.asarray(table, dtype=np.int64)
            if table.shape != (field.q,):
                raise WrongLength(f"Value table has shape {table.shape}, expected ({field.q},)")
            self.__dict__["table"] = table

    @classmethod
    def monomial(cls, field: FiniteField, d: int, c: int = 1) -> "PolyMap":
        return cls(field, {d: c})

    @classmethod
    def fromTable(cls, field: FiniteField, table) -> "PolyMap":
        return cls(field, table=table)

    @classmethod
    def zero(cls, field: FiniteField) -> "PolyMap":
        return cls(field, {})

    @property
    def terms(self) -> dict[int, int]:
        """Nonzero coefficients of the canonical degree-< q form, by exponent."""
        if self._terms is None:
            coeffs = interpolateCoefficients(self.field, self.table)
            self._terms = {int(e): int(coeffs[e]) for e in np.flatnonzero(coeffs)}
        return self._terms

    @property
    def coeffs(self) -> np.ndarray:
        out = np.zeros(self.field.q, dtype=np.int64)
        for e, c in self.terms.items():
            out[e] = c
        return out

    @cached_property
    def table(self) -> np.ndarray:
        xs = self.field.elements()
        acc = np.zeros(self.field.q, dtype=np.int64)
        for e, c in self.terms.items():
            acc = self.field.add(acc, self.field.mul(c, self.field.power(xs, e)))
        return acc

    @property
    def degree(self) -> int:
        return max(self.terms, default=0)

    def __add__(self, other: "PolyMap") -> "PolyMap":
        if other.field != self.field:
            raise FieldMismatch(f"Cannot add maps over {self.field} and {other.field}")
        return PolyMap.fromTable(self.field, self.field.add(self.table, other.table))

    def scale(self, c: int) -> "PolyMap":
        return PolyMap(self.field, {e: self.field.mul(c, v) for e, v in self.terms.items()})

    def frobeniusTwist(self) -> "PolyMap":
        """The map x -> f(x)^p as a reduced polynomial."""
        p = self.field.p
        return PolyMap(self.field, {e * p: self.field.power(c, p) for e, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, PolyMap) or other.field != self.field:
            return False
        return bool(np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.field, self.table.tobytes()))

    def __repr__(self):
        body = " + ".join(f"{c}*x^{e}" for e, c in sorted(self.terms.items(), reverse=True)) or "0"
        return f"PolyMap({body} over {self.field})"


def evaluate(f: PolyMap, x: FieldElement) -> FieldElement:
    """Horner evaluation of the canonical coefficient vector."""
    if x.field != f.field:
        raise FieldMismatch(f"{x!r} is not in {f.field}")
    F = f.field
    acc = 0
    for c in f.coeffs[::-1]:
        acc = F.add(F.mul(acc, x.value), int(c))
    return FieldElement(int(acc), F)


def interpolateCoefficients(field: FiniteField, table) -> np.ndarray:
    """Coefficients a_0..a_{q-1} of the unique reduced polynomial with this table.

    a_0 = f(0), a_{q-1} = -sum_a f(a), and a_i = -sum_{a != 0} f(a) a^{-i} otherwise.
    """
    values = np.asarray(table, dtype=np.int64)
    q = field.q
    if values.shape != (q,):
        raise WrongLength(f"Value table has {values.size} entries, expected {q}")
    if q > INTERPOLATION_LIMIT:
        raise TooLarge(f"Interpolation over {field} exceeds q = {INTERPOLATION_LIMIT}")

    coeffs = np.zeros(q, dtype=np.int64)
    coeffs[0] = values[0]
    coeffs[q - 1] = field.neg(field.sum(values))
    if q > 2:
        points = np.arange(1, q, dtype=np.int64)
        live = values[1:] != 0
        logPoints = field.logTable[points[live]]
        logValues = field.logTable[values[1:][live]]
        for i in range(1, q - 1):
            terms = field.expTable[(logValues - i * logPoints) % (q - 1)]
            coeffs[i] = field.neg(field.sum(terms))
    return coeffs


def interpolate(field: FiniteField, table) -> PolyMap:
    coeffs = interpolateCoefficients(field, table)
    f = PolyMap(field, {int(e): int(coeffs[e]) for e in np.flatnonzero(coeffs)})
    f.__dict__["table"] = np.asarray(table, dtype=np.int64).copy()
    return f


# ---------------------------------------------------------------------------
# Dembowski-Ostrom classification
# ---------------------------------------------------------------------------

@dataclass
class DOClass:
    tag: DOTag
    doPart: PolyMap | None = None       # present for DO and AffineDO
    affinePart: PolyMap | None = None   # present for Affine and AffineDO

    def toDict(self) -> dict:
        return {
            "tag": str(self.tag),
            "doTerms": dict(self.doPart.terms) if self.doPart is not None else None,
            "affineTerms": dict(self.affinePart.terms) if self.affinePart is not None else None,
        }


def doExponents(field: FiniteField) -> set[int]:
    """p^i + p^j with i <= j (odd p) or i < j (p = 2)."""
    p, m = field.p, field.m
    strict = 1 if p == 2 else 0
    return {p ** i + p ** j for i in range(m) for j in range(i + strict, m)}


def affineExponents(field: FiniteField) -> set[int]:
    return {0} | {field.p ** i for i in range(field.m)}


def classify(f: PolyMap) -> DOClass:
    """Tag of the canonical form; the zero map counts as DO."""
    exponents = set(f.terms)
    doSet = doExponents(f.field)
    affineSet = affineExponents(f.field)

    def part(allowed: set[int]) -> PolyMap:
        return PolyMap(f.field, {e: c for e, c in f.terms.items() if e in allowed})

    if exponents <= doSet:
        return DOClass(DOTag.DO, doPart=part(doSet))
    if exponents <= affineSet:
        return DOClass(DOTag.AFFINE, affinePart=part(affineSet))
    if exponents <= doSet | affineSet:
        return DOClass(DOTag.AFFINE_DO, doPart=part(doSet), affinePart=part(affineSet))
    return DOClass(DOTag.GENERAL)
