"""Text formats: spec strings for fields, functions, groups and elements, plus the
files written and read by the command line."""
import csv
import logging
import os
import re

import numpy as np

from .components import BooleanFunction, negaSpectrum
from .designs import IncidenceStructure, verifyDesign, verifyPlane
from .funcMaps import PolyMap
from .gf import FiniteField, makeField
from .groups import (
    BilinearForm,
    CocycleGroup,
    FiniteGroup,
    ProductGroup,
    subgroupClosure,
    toCodes,
)
from .rds import RelativeDifferenceSet, relativeDifferenceSet, spanningSubset
from .semifield import PreSemifield, Spread

logger = logging.getLogger(__name__)

_FIELD_RE = re.compile(r"^\s*(\d+)(?:\^(\d+))?(?:/([\d,\s]+))?\s*$")
_TUPLE_RE = re.compile(r"\(([^)]*)\)")


# ---------------------------------------------------------------------------
# Spec strings
# ---------------------------------------------------------------------------

def parseFieldSpec(spec: str) -> FiniteField:
    """'p', 'p^m' or 'p^m/c0,...,cm' (modulus coefficients, constant term first)."""
    match = _FIELD_RE.match(spec or "")
    if not match:
        raise ValueError(f"Cannot parse field spec '{spec}' (expected p^m or p^m/c0,...,cm)")
    p = int(match.group(1))
    m = int(match.group(2) or 1)
    modulus = None
    if match.group(3):
        modulus = [int(c) for c in match.group(3).split(",") if c.strip()]
    return makeField(p, m, modulus)


def parsePolySpec(field: FiniteField, spec: str) -> PolyMap:
    """Sparse polynomial 'e:c,e:c,...'; a bare exponent means coefficient 1."""
    terms: dict[int, int] = {}
    for token in (spec or "").split(","):
        token = token.strip()
        if not token:
            continue
        exponent, _, coefficient = token.partition(":")
        try:
            e = int(exponent)
            c = int(coefficient) if coefficient else 1
        except ValueError:
            raise ValueError(f"Cannot parse polynomial term '{token}' (expected e:c)")
        if e < 0 or not 0 <= c < field.q:
            raise ValueError(f"Term '{token}' is out of range for {field}")
        terms[e] = field.add(terms.get(e, 0), c)
    return PolyMap(field, terms)


def polySpec(f: PolyMap) -> str:
    return ",".join(f"{e}:{c}" for e, c in sorted(f.terms.items()))


def parseGroupSpec(spec: str) -> FiniteGroup:
    """'Zn', 'Zn1xZn2...', 'cocycle:<field>:product|zero|albertK|twistedK' or
    'cocycle:2^m:form=<hex rows>'."""
    spec = (spec or "").strip()
    if spec.startswith("cocycle:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"Cannot parse group spec '{spec}'")
        _, base, kind = parts
        if kind.startswith("form="):
            rows = [int(r, 16) for r in kind[len("form="):].split(",") if r]
            m = int(base.split("^")[1]) if "^" in base else len(rows)
            return CocycleGroup.fromForm(BilinearForm(rows, m))
        F = parseFieldSpec(base)
        if kind == "product":
            return CocycleGroup.fieldProduct(F)
        if kind == "zero":
            return CocycleGroup.directProduct(F)
        rule = re.fullmatch(r"(albert|twisted)(\d+)", kind)
        if rule:
            build = PreSemifield.albert if rule.group(1) == "albert" else PreSemifield.twistedField
            return CocycleGroup.fromSemifield(build(F, int(rule.group(2))))
        raise ValueError(f"Unknown cocycle kind '{kind}' (expected product, zero, albertK, twistedK or form=...)")
    factors = spec.split("x")
    if not spec or any(not re.fullmatch(r"Z\d+", f) for f in factors):
        raise ValueError(f"Cannot parse group spec '{spec}' (expected Zn or Zn1xZn2...)")
    return ProductGroup([int(f[1:]) for f in factors])


def parseElements(group: FiniteGroup, text: str) -> np.ndarray:
    """'1,2,4' (codes) or '(0,0),(0,1)' (coordinate tuples) as sorted codes."""
    text = (text or "").strip()
    if not text:
        return np.zeros(0, dtype=np.int64)
    try:
        if "(" in text:
            items = [tuple(int(v) for v in t.split(",")) for t in _TUPLE_RE.findall(text)]
        else:
            items = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValueError(f"Cannot parse element list '{text}'")
    return toCodes(group, items)


def formatElements(group: FiniteGroup, codes) -> str:
    return ",".join(group.formatCode(int(c)) for c in codes)


# ---------------------------------------------------------------------------
# Truth tables
# ---------------------------------------------------------------------------

def truthTableFromHex(text: str, m: int) -> BooleanFunction:
    """Bit x of the hex integer is f(x)."""
    try:
        value = int(text.strip().lower().removeprefix("0x"), 16)
    except ValueError:
        raise ValueError(f"Cannot parse truth table '{text}' as hex")
    if value >> (1 << m):
        raise ValueError(f"Truth table '{text}' has more than {1 << m} bits")
    bits = [(value >> x) & 1 for x in range(1 << m)]
    return BooleanFunction(m, np.array(bits, dtype=np.uint8))


def truthTableToHex(f: BooleanFunction) -> str:
    value = sum(int(b) << x for x, b in enumerate(f.table))
    width = max(1, (1 << f.m) // 4)
    return f"{value:0{width}x}"


def saveNegaSpectrum(f: BooleanFunction, path: str) -> None:
    re_, im = negaSpectrum(f)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["a", "re", "im", "modulus2"])
        for a, (r, i) in enumerate(zip(re_, im)):
            writer.writerow([a, int(r), int(i), int(r * r + i * i)])
    logger.info(f"Nega spectrum of {f} written to {path}")


# ---------------------------------------------------------------------------
# Difference sets
# ---------------------------------------------------------------------------

def saveRds(D: RelativeDifferenceSet, path: str) -> None:
    try:
        parseGroupSpec(D.group.spec)
    except ValueError:
        raise ValueError(f"{D.group.spec} cannot be written as a group spec string; save its source instead")
    generators = spanningSubset(D.group, D.forbidden)
    with open(path, "w") as handle:
        handle.write(D.group.spec + "\n")
        handle.write(formatElements(D.group, generators) + "\n")
        for r in D.R:
            handle.write(D.group.formatCode(int(r)) + "\n")
    logger.info(f"{D.params} difference set written to {path}")


def readRdsFile(path: str) -> tuple[FiniteGroup, np.ndarray, np.ndarray]:
    """Group, forbidden subgroup and elements of a difference set file, unverified."""
    with open(path) as handle:
        lines = [line.strip() for line in handle if line.strip()]
    if len(lines) < 2:
        raise ValueError(f"{path} needs a group line and a forbidden-generator line")
    group = parseGroupSpec(lines[0])
    forbidden = subgroupClosure(group, parseElements(group, lines[1]))
    R = np.concatenate([parseElements(group, line) for line in lines[2:]]) if lines[2:] \
        else np.zeros(0, dtype=np.int64)
    return group, forbidden, R


def loadRds(path: str) -> RelativeDifferenceSet:
    """Read and re-verify a difference set file."""
    group, forbidden, R = readRdsFile(path)
    return relativeDifferenceSet(group, forbidden, R, source=os.path.basename(path))


# ---------------------------------------------------------------------------
# Semifields and spreads
# ---------------------------------------------------------------------------

def saveSemifield(S: PreSemifield, path: str) -> None:
    identity = S.identityElement
    with open(path, "w") as handle:
        handle.write(f"# semifield {S.field.spec} commutative={int(S.commutative)} "
                     f"identity={'-' if identity is None else identity}\n")
        for row in S.table:
            handle.write(" ".join(str(int(v)) for v in row) + "\n")
    logger.info(f"{S} written to {path}")


def loadSemifield(path: str) -> PreSemifield:
    with open(path) as handle:
        header = handle.readline().split()
        if len(header) < 3 or header[:2] != ["#", "semifield"]:
            raise ValueError(f"{path} is not a semifield table")
        field = parseFieldSpec(header[2])
        rows = [[int(v) for v in line.split()] for line in handle if line.strip()]
    return PreSemifield.fromTable(field, rows)


def saveSpread(spread: Spread, path: str) -> None:
    """Each subspace as a header line followed by its basis vectors, base-p digits packed into hex."""
    weights = spread.p ** np.arange(2 * spread.n, dtype=np.int64)
    with open(path, "w") as handle:
        handle.write(f"# spread p={spread.p} n={spread.n} count={len(spread.subspaces)}\n")
        for i, basis in enumerate(spread.subspaces):
            handle.write(f"subspace {i}\n")
            for vector in np.asarray(basis, dtype=np.int64):
                handle.write(f"{int(vector @ weights):x}\n")
    logger.info(f"Spread with {len(spread.subspaces)} subspaces written to {path}")


# ---------------------------------------------------------------------------
# Designs and planes
# ---------------------------------------------------------------------------

def saveIncidence(I: IncidenceStructure, path: str, params: tuple | None = None) -> None:
    with open(path, "w") as handle:
        header = f"# incidence points={I.numPoints} lines={I.numLines}"
        if params:
            header += " params=" + ",".join(str(v) for v in params)
        handle.write(header + "\n")
        if I.pointClass is not None:
            handle.write("pointClass " + " ".join(str(int(c)) for c in I.pointClass) + "\n")
        if I.lineClass is not None:
            handle.write("lineClass " + " ".join(str(int(c)) for c in I.lineClass) + "\n")
        for line in I.lines:
            handle.write("line " + " ".join(str(int(v)) for v in line) + "\n")
    logger.info(f"{I} written to {path}")


def loadIncidence(path: str):
    """Read an incidence structure and re-verify it: as a design when it carries
    classes, as a plane otherwise. Returns (structure, report)."""
    numPoints = None
    params = None
    pointClass = lineClass = None
    lines = []
    with open(path) as handle:
        for raw in handle:
            tag, _, rest = raw.strip().partition(" ")
            if tag == "#":
                for item in rest.split():
                    key, _, value = item.partition("=")
                    if key == "points":
                        numPoints = int(value)
                    elif key == "params":
                        params = tuple(int(v) for v in value.split(","))
            elif tag == "pointClass":
                pointClass = np.array(rest.split(), dtype=np.int64)
            elif tag == "lineClass":
                lineClass = np.array(rest.split(), dtype=np.int64)
            elif tag == "line":
                lines.append(np.array(sorted(int(v) for v in rest.split()), dtype=np.int64))
            elif tag:
                raise ValueError(f"Unknown record '{tag}' in {path}")
    if numPoints is None:
        raise ValueError(f"{path} has no incidence header")
    I = IncidenceStructure(numPoints=numPoints, lines=lines, pointClass=pointClass,
                           lineClass=lineClass, name=os.path.basename(path))
    if pointClass is not None and lineClass is not None:
        return I, verifyDesign(I, params)
    return I, verifyPlane(I)
