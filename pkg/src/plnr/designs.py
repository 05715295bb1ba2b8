"""Divisible designs and projective planes built from semifields and difference sets."""
import hashlib
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .common import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DesignInvalid,
    DesignReport,
    EXHAUSTIVE_PLANE_POINTS,
    MAX_DESIGN_FIELD_ORDER,
    MAX_DESIGN_GROUP_ORDER,
    MissingClasses,
    PlaneReport,
    TooLarge,
)
from .rds import RelativeDifferenceSet
from .semifield import PreSemifield, requirePresemifield
from .workers import runCells

logger = logging.getLogger(__name__)

POINT_CHUNK = 512


@dataclass
class IncidenceStructure:
    numPoints: int
    lines: list                             # sorted point-index arrays
    pointClass: np.ndarray | None = None    # point index -> class id
    lineClass: np.ndarray | None = None     # line index -> class id
    name: str = ""

    @property
    def numLines(self) -> int:
        return len(self.lines)

    @cached_property
    def pointLines(self) -> list:
        """Sorted line indices through each point."""
        sizes = np.array([line.size for line in self.lines], dtype=np.int64)
        flatPoints = np.concatenate(self.lines) if self.lines else np.zeros(0, dtype=np.int64)
        flatLines = np.repeat(np.arange(self.numLines, dtype=np.int64), sizes)
        order = np.argsort(flatPoints, kind="stable")
        bounds = np.searchsorted(flatPoints[order], np.arange(self.numPoints + 1))
        return [flatLines[order[bounds[i]:bounds[i + 1]]] for i in range(self.numPoints)]

    def lineSizes(self) -> np.ndarray:
        return np.array([line.size for line in self.lines], dtype=np.int64)

    def pointDegrees(self) -> np.ndarray:
        return np.array([ls.size for ls in self.pointLines], dtype=np.int64)

    def __repr__(self):
        return f"IncidenceStructure({self.name or 'unnamed'}: {self.numPoints} points, {self.numLines} lines)"


def _normalized(lines) -> list:
    return [np.unique(np.asarray(line, dtype=np.int64)) for line in lines]


def dual(I: IncidenceStructure) -> IncidenceStructure:
    """Swap points and lines (and their classes)."""
    return IncidenceStructure(numPoints=I.numLines, lines=[ls.copy() for ls in I.pointLines],
                              pointClass=I.lineClass, lineClass=I.pointClass, name=f"dual of {I.name}")


def fingerprint(I: IncidenceStructure, relabel: np.ndarray | None = None) -> str:
    """sha256 over the sorted list of sorted lines, after an optional point relabeling."""
    lines = I.lines if relabel is None else [np.sort(relabel[line]) for line in I.lines]
    digest = hashlib.sha256()
    for line in sorted(tuple(int(v) for v in line) for line in lines):
        digest.update(np.asarray(line, dtype=np.int64).tobytes())
        digest.update(b"|")
    return digest.hexdigest()


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def designFromSemifield(S: PreSemifield) -> IncidenceStructure:
    """Points (x, y), lines [m, b] = {(x, m o x + b)}; classes by x and by m."""
    q = S.q
    if q > MAX_DESIGN_FIELD_ORDER:
        raise TooLarge(f"Designs from semifields are limited to q <= {MAX_DESIGN_FIELD_ORDER}, got {q}")
    requirePresemifield(S)
    F = S.field
    xs = F.elements()
    lines = []
    for m in range(q):
        slope = S.table[m, :]
        for b in range(q):
            lines.append(np.sort(xs * q + np.asarray(F.add(slope, b))))
    pointClass = np.repeat(np.arange(q, dtype=np.int64), q)
    return IncidenceStructure(numPoints=q * q, lines=lines, pointClass=pointClass,
                              lineClass=pointClass.copy(), name=f"design of {S}")


def designFromRds(D: RelativeDifferenceSet) -> IncidenceStructure:
    """Points G, lines R*g, classes the right cosets N*g (the same for lines)."""
    G = D.group
    if G.order > MAX_DESIGN_GROUP_ORDER:
        raise TooLarge(f"Designs from difference sets are limited to |G| <= {MAX_DESIGN_GROUP_ORDER}")
    codes = G.codes()
    lines = _normalized(np.asarray(G.opCodes(D.R[None, :], codes[:, None])))

    cosets = np.asarray(G.opCodes(D.forbidden[None, :], codes[:, None])).min(axis=1)
    _, pointClass = np.unique(cosets, return_inverse=True)
    return IncidenceStructure(numPoints=G.order, lines=lines, pointClass=pointClass.astype(np.int64),
                              lineClass=pointClass.astype(np.int64), name=f"design of {D.source or G.spec}")


def canonicalIdentification(S: PreSemifield) -> np.ndarray:
    """Design point (x, y) -> group element (x, y + x o x), as codes x*q + y."""
    q = S.q
    xs = np.repeat(np.arange(q, dtype=np.int64), q)
    ys = np.tile(np.arange(q, dtype=np.int64), q)
    return xs * q + np.asarray(S.field.add(ys, S.mul(xs, xs)))


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _firstBadJoin(incidence: list, members: list, classes: np.ndarray, size: int,
                  lam: int, start: int, stop: int):
    """First (a, b, count) with a in [start, stop) where a and b are joined by the
    wrong number of blocks: lam across classes, 0 inside a class."""
    for a in range(start, stop):
        through = incidence[a]
        if through.size:
            counts = np.bincount(np.concatenate([members[t] for t in through]), minlength=size)
        else:
            counts = np.zeros(size, dtype=np.int64)
        expected = np.where(classes == classes[a], 0, lam)
        expected[a] = counts[a]
        bad = np.flatnonzero(counts != expected)
        if bad.size:
            return (a, int(bad[0]), int(counts[bad[0]]))
    return None


def _scanJoins(incidence: list, members: list, classes: np.ndarray, size: int, lam: int,
               threads: int | None):
    starts = list(range(0, size, POINT_CHUNK))
    found = runCells(lambda s: _firstBadJoin(incidence, members, classes, size, lam, s, min(s + POINT_CHUNK, size)),
                     starts, threads)
    return next((w for w in found if w), None)


def _classShape(classes: np.ndarray) -> tuple[int, np.ndarray]:
    _, counts = np.unique(classes, return_counts=True)
    return counts.size, counts


def inferParameters(I: IncidenceStructure) -> tuple:
    if I.pointClass is None or I.lineClass is None:
        raise MissingClasses(f"{I} has no point or line classes")
    m, sizes = _classShape(I.pointClass)
    k = int(I.lines[0].size) if I.lines else 0
    lam = 0
    for a in range(I.numPoints):
        others = np.flatnonzero(I.pointClass != I.pointClass[a])
        if others.size:
            b = others[0]
            lam = int(np.intersect1d(I.pointLines[a], I.pointLines[b]).size)
            break
    return (m, int(sizes[0]), k, lam)


def verifyDesign(I: IncidenceStructure, expected: tuple | None = None,
                 threads: int | None = None) -> DesignReport:
    """Divisible design axioms over point and line classes."""
    if I.pointClass is None or I.lineClass is None:
        raise MissingClasses(f"{I} has no point or line classes")
    m, n, k, lam = expected or inferParameters(I)
    witnesses: dict[str, tuple] = {}

    pm, pSizes = _classShape(I.pointClass)
    d1 = pm == m and bool(np.all(pSizes == n))
    if not d1:
        witnesses["D1"] = (pm, int(pSizes.min()), int(pSizes.max()))
    lm, lSizes = _classShape(I.lineClass)
    d2 = lm == m and bool(np.all(lSizes == n))
    if not d2:
        witnesses["D2"] = (lm, int(lSizes.min()), int(lSizes.max()))

    bad = _scanJoins(I.pointLines, I.lines, I.pointClass, I.numPoints, lam, threads)
    d3 = bad is None
    if bad:
        witnesses["D3"] = bad
    bad = _scanJoins(I.lines, I.pointLines, I.lineClass, I.numLines, lam, threads)
    d4 = bad is None
    if bad:
        witnesses["D4"] = bad

    lineSizes = I.lineSizes()
    degrees = I.pointDegrees()
    d5 = bool(np.all(lineSizes == k) and np.all(degrees == k))
    if not d5:
        badLine = np.flatnonzero(lineSizes != k)
        badPoint = np.flatnonzero(degrees != k)
        witnesses["D5"] = ("line", int(badLine[0]), int(lineSizes[badLine[0]])) if badLine.size \
            else ("point", int(badPoint[0]), int(degrees[badPoint[0]]))

    report = DesignReport(d1=d1, d2=d2, d3=d3, d4=d4, d5=d5, params=(m, n, k, lam), witnesses=witnesses)
    logger.debug(f"{I}: design check {report.toDict()}")
    return report


# ---------------------------------------------------------------------------
# Planes
# ---------------------------------------------------------------------------

def planeFromDesign(I: IncidenceStructure) -> IncidenceStructure:
    """Adjoin infinity, one point per line class, one line per point class and the line at infinity."""
    report = verifyDesign(I)
    m, n, k, lam = report.params
    if not report.ok or not (m == n == k and lam == 1):
        raise DesignInvalid(f"{I} is not a divisible (n,n,n,1) design: {report.toDict()}")

    _, pointClass = np.unique(I.pointClass, return_inverse=True)
    _, lineClass = np.unique(I.lineClass, return_inverse=True)
    infinity = I.numPoints
    atInfinity = infinity + 1 + np.arange(n, dtype=np.int64)

    lines = [np.append(line, atInfinity[lineClass[i]]) for i, line in enumerate(I.lines)]
    for c in range(n):
        lines.append(np.append(np.flatnonzero(pointClass == c), infinity))
    lines.append(np.append(infinity, atInfinity))
    return IncidenceStructure(numPoints=I.numPoints + n + 1, lines=_normalized(lines),
                              name=f"plane from {I.name}")


def _collinear(I: IncidenceStructure, points) -> bool:
    common = I.pointLines[points[0]]
    for point in points[1:]:
        common = np.intersect1d(common, I.pointLines[point], assume_unique=True)
    return common.size > 0


def findQuadrilateral(I: IncidenceStructure) -> tuple | None:
    """Four points with no three on a common line, found greedily."""
    chosen: list[int] = []
    for candidate in range(I.numPoints):
        if len(chosen) == 4:
            break
        if len(chosen) < 2:
            chosen.append(candidate)
            continue
        pairs = [(a, b) for i, a in enumerate(chosen) for b in chosen[i + 1:]]
        if not any(_collinear(I, (a, b, candidate)) for a, b in pairs):
            chosen.append(candidate)
    return tuple(chosen) if len(chosen) == 4 else None


def _sampledJoins(incidence: list, size: int, samples: int, rng) -> tuple | None:
    a = rng.integers(0, size, samples)
    b = rng.integers(0, size - 1, samples)
    b = b + (b >= a)
    for x, y in zip(a, b):
        count = np.intersect1d(incidence[x], incidence[y], assume_unique=True).size
        if count != 1:
            return (int(x), int(y), int(count))
    return None


def verifyPlane(I: IncidenceStructure, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                threads: int | None = None) -> PlaneReport:
    """Projective plane axioms; joins are sampled above the exhaustive point threshold."""
    sizes = I.lineSizes()
    order = int(sizes[0]) - 1 if sizes.size else None
    consistent = order is not None and bool(
        np.all(sizes == order + 1) and np.all(I.pointDegrees() == order + 1)
        and I.numPoints == I.numLines == order * order + order + 1)

    witnesses: dict[str, tuple] = {}
    sampled = I.numPoints > EXHAUSTIVE_PLANE_POINTS
    if sampled:
        rng = np.random.default_rng(seed)
        badPoints = _sampledJoins(I.pointLines, I.numPoints, samples, rng)
        badLines = _sampledJoins(I.lines, I.numLines, samples, rng)
        logger.info(f"{I}: joins checked on {samples} sampled pairs (seed {seed})")
    else:
        badPoints = _scanJoins(I.pointLines, I.lines, np.arange(I.numPoints), I.numPoints, 1, threads)
        badLines = _scanJoins(I.lines, I.pointLines, np.arange(I.numLines), I.numLines, 1, threads)
    if badPoints:
        witnesses["P1"] = badPoints
    if badLines:
        witnesses["P2"] = badLines

    quadrilateral = findQuadrilateral(I)
    return PlaneReport(p1=badPoints is None, p2=badLines is None, p3=quadrilateral is not None,
                       order=order, consistent=consistent, sampled=sampled,
                       seed=seed if sampled else None, quadrilateral=quadrilateral, witnesses=witnesses)
