from enum import Enum
from dataclasses import dataclass, field

# Size limits. Tables and counters above these are refused with TooLarge /
# RangeTooLarge rather than silently taking hours.
MAX_FIELD_ORDER = 1 << 20
EVEN_LOG_TABLE_LIMIT = 1 << 16
ODD_LOG_TABLE_LIMIT = 3 ** 10
INTERPOLATION_LIMIT = 1 << 14
PRODUCT_TABLE_LIMIT = 1 << 10
EXHAUSTIVE_TRIPLES_LIMIT = 64
MAX_CENSUS_ORDER = 1 << 20
MAX_QUOTIENT_ORDER = 1 << 16
MAX_RDS_GROUP_ORDER = 1 << 20
MAX_RDS_FIELD_ORDER = 1 << 10
MAX_DESIGN_FIELD_ORDER = 64
MAX_DESIGN_GROUP_ORDER = 1 << 14
MAX_SPREAD_ORDER = 1 << 8
COMMUTATIVITY_SCAN_LIMIT = 1 << 12
EXHAUSTIVE_PLANE_POINTS = 10_000
EVEN_SEARCH_LIMIT = 1 << 14
ODD_SEARCH_LIMIT = 3 ** 8

DEFAULT_SEED = 20240601
DEFAULT_SAMPLES = 10_000
MAX_VIOLATIONS = 16


class Convention(Enum):
    ODD = ("ODD", "odd")
    EVEN = ("EVEN", "even")

    def __str__(self):
        return self.value[1]

    def identifier(self):
        return self.value[0]

    @classmethod
    def fromString(cls, name: str) -> "Convention":
        for member in cls:
            if member.value[1] == name.lower():
                return member
        raise ValueError(f"Unknown convention '{name}', expected 'odd' or 'even'")


class DOTag(Enum):
    DO = ("DO", "do")
    AFFINE = ("Affine", "affine")
    AFFINE_DO = ("AffineDO", "affine-do")
    GENERAL = ("General", "general")

    def __str__(self):
        return self.value[0]

    def identifier(self):
        return self.value[1]


class ProductRule(Enum):
    FIELD = ("FIELD", "field-product")
    ALBERT = ("ALBERT", "albert")
    TWISTED = ("TWISTED", "twisted-field")
    FROM_PLANAR_ODD = ("FROM_PLANAR_ODD", "from-planar-odd")
    FROM_PLANAR_EVEN = ("FROM_PLANAR_EVEN", "from-planar-even")
    ISOTOPE = ("ISOTOPE", "identity-isotope")
    OPPOSITE = ("OPPOSITE", "opposite")
    TABLE = ("TABLE", "table")

    def __str__(self):
        return self.value[1]

    def identifier(self):
        return self.value[0]


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------

@dataclass
class PlanarVerdict:
    """Outcome of a planarity check; failingA is the smallest a whose shift map is not bijective."""
    planar: bool
    convention: Convention
    failingA: int | None = None

    def toDict(self) -> dict:
        return {"planar": self.planar, "convention": str(self.convention), "failingA": self.failingA}


@dataclass
class MonomialHit:
    d: int
    cs: list                    # coefficient encodings c with c*x^d planar
    method: str = "exhaustive"  # "exhaustive" | "coset" | "affine"


@dataclass
class MonomialSearchReport:
    fieldSpec: str
    convention: Convention
    hits: list = field(default_factory=list)      # [MonomialHit, ...] ordered by d
    orbits: list = field(default_factory=list)    # hit exponents grouped under d -> p*d mod (q-1)
    checked: int = 0                              # number of (d, c) cells actually scanned
    elapsed: float = 0.0

    def hitExponents(self) -> list[int]:
        return [h.d for h in self.hits]

    def toDict(self) -> dict:
        return {
            "field": self.fieldSpec,
            "convention": str(self.convention),
            "hits": [{"d": h.d, "cs": list(h.cs), "method": h.method} for h in self.hits],
            "orbits": [list(o) for o in self.orbits],
            "checked": self.checked,
            "elapsed": round(self.elapsed, 3),
        }


@dataclass
class AxiomReport:
    s1: bool
    s2: bool
    s3: bool
    s4: bool
    identity: int | None = None
    witnesses: dict = field(default_factory=dict)   # axiom name -> counterexample tuple
    sampled: bool = False                           # S2 checked on random triples only
    seed: int | None = None

    @property
    def presemifield(self) -> bool:
        return self.s1 and self.s2 and self.s3

    @property
    def semifield(self) -> bool:
        return self.presemifield and self.s4

    def toDict(self) -> dict:
        return {
            "S1": self.s1, "S2": self.s2, "S3": self.s3, "S4": self.s4,
            "identity": self.identity,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
            "sampled": self.sampled,
            "seed": self.seed,
        }


@dataclass
class RdsVerdict:
    ok: bool
    params: tuple | None = None     # (m, n, k, lambda) when ok
    violations: list = field(default_factory=list)  # [(element code, count, expected), ...]

    def toDict(self) -> dict:
        out = {"ok": self.ok, "violations": [list(v) for v in self.violations]}
        if self.params is not None:
            out.update(dict(zip(("m", "n", "k", "lambda"), self.params)))
        return out


@dataclass
class DesignReport:
    d1: bool
    d2: bool
    d3: bool
    d4: bool
    d5: bool
    params: tuple
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.d1 and self.d2 and self.d3 and self.d4 and self.d5

    def toDict(self) -> dict:
        return {
            "D1": self.d1, "D2": self.d2, "D3": self.d3, "D4": self.d4, "D5": self.d5,
            "ok": self.ok,
            "params": list(self.params),
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


@dataclass
class PlaneReport:
    p1: bool
    p2: bool
    p3: bool
    order: int | None
    consistent: bool            # every line has n+1 points and every point lies on n+1 lines
    sampled: bool = False
    seed: int | None = None
    quadrilateral: tuple | None = None
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.p1 and self.p2 and self.p3 and self.consistent

    def toDict(self) -> dict:
        return {
            "P1": self.p1, "P2": self.p2, "P3": self.p3,
            "ok": self.ok,
            "order": self.order,
            "consistent": self.consistent,
            "sampled": self.sampled,
            "seed": self.seed,
            "quadrilateral": list(self.quadrilateral) if self.quadrilateral else None,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class PlnrError(Exception):
    """Root of every error raised by plnr."""


class InvariantBreach(PlnrError):
    """An internal consistency check failed; the result cannot be trusted."""


class NonPrime(PlnrError, ValueError):
    pass


class ReducibleModulus(PlnrError, ValueError):
    pass


class FieldMismatch(PlnrError, ValueError):
    pass


class DivisionByZero(PlnrError, ZeroDivisionError):
    pass


class NotADivisor(PlnrError, ValueError):
    pass


class GroupMismatch(PlnrError, ValueError):
    pass


class TooLarge(PlnrError, ValueError):
    pass


class NotASubgroup(PlnrError, ValueError):
    pass


class WrongLength(PlnrError, ValueError):
    pass


class EvenCharacteristic(PlnrError, ValueError):
    pass


class OddCharacteristic(PlnrError, ValueError):
    pass


class WrongCharacteristic(PlnrError, ValueError):
    pass


class BadChain(PlnrError, ValueError):
    pass


class OddQuotientViolated(PlnrError, ValueError):
    pass


class ZeroZeta(PlnrError, ValueError):
    pass


class RangeTooLarge(PlnrError, ValueError):
    pass


class NotPlanar(PlnrError, ValueError):
    pass


class NotAffineDO(UserWarning):
    """Logged, never raised: the semifield construction is still emitted."""


class ZeroElement(PlnrError, ValueError):
    pass


class AxiomsFail(PlnrError, ValueError):
    pass


class NotInForbidden(PlnrError, ValueError):
    pass


class ProjectionNotInjective(PlnrError, ValueError):
    pass


class NoSplitting(PlnrError, ValueError):
    pass


class DegenerateSplit(PlnrError, ValueError):
    pass


class MissingClasses(PlnrError, ValueError):
    pass


class DesignInvalid(PlnrError, ValueError):
    pass


class NotSymmetric(PlnrError, ValueError):
    pass


class CountingFails(PlnrError, ValueError):
    pass


class NotDifferenceSet(PlnrError, ValueError):
    pass
