"""Worked examples with known answers, run by the `fixtures` command."""
import logging
from math import gcd
from time import monotonic
from typing import Callable

from .common import Convention
from .components import (
    BooleanFunction,
    bentSupportDifferenceSet,
    binaryGroup,
    isBent,
    negabentOfFourBlock,
    tripleEquivalence,
)
from .designs import designFromSemifield, planeFromDesign, verifyDesign, verifyPlane
from .funcMaps import PolyMap
from .gf import makeField
from .groups import ProductGroup
from .planar import cmMonomial, isPlanar, kantorPlanar, searchPlanarMonomials
from .rds import projectRds, rdsFromSemifield, relativeDifferenceSet, verifyRds
from .semifield import PreSemifield, spreadFromSemifield

logger = logging.getLogger(__name__)


def _exampleA():
    G = ProductGroup([8])
    verdict = verifyRds(G, [0, 4], [1, 2, 4])
    return verdict.params == (4, 2, 3, 1), verdict.toDict()


def _exampleB():
    G = ProductGroup([4, 4])
    N = [(0, 0), (0, 2), (2, 0), (2, 2)]
    verdict = verifyRds(G, N, [(0, 0), (0, 1), (1, 3), (3, 0)])
    return verdict.params == (4, 4, 4, 1), verdict.toDict()


def _exampleC():
    G = ProductGroup([3, 3])
    verdict = verifyRds(G, [(0, 0), (0, 1), (0, 2)], [(0, 0), (1, 1), (2, 1)])
    return verdict.params == (3, 3, 3, 1), verdict.toDict()


def _projectionA():
    G = ProductGroup([8])
    D = relativeDifferenceSet(G, [0, 4], [1, 2, 4], source="Z8 example")
    P = projectRds(D, [4])
    return P.params == (4, 1, 3, 2), {"params": list(P.params)}


def _squareGF9():
    verdict = isPlanar(PolyMap.monomial(makeField(3, 2), 2))
    return verdict.planar, verdict.toDict()


def _cmMonomials():
    mismatches = []
    for m in (2, 3):
        F = makeField(3, m)
        for k in range(1, 5):
            expected = gcd(k, 2 * m) == 1
            if isPlanar(cmMonomial(F, k)).planar != expected:
                mismatches.append((m, k))
    return not mismatches, {"mismatches": mismatches}


def _trinomialGF27():
    verdicts = {}
    # over GF(9) the map reduces to x^6, a Frobenius image of x^2
    for m in (2, 3, 4):
        F = makeField(3, m)
        verdicts[f"3^{m}"] = isPlanar(PolyMap(F, {10: 1, 6: 1, 2: 2})).planar
    return verdicts == {"3^2": True, "3^3": True, "3^4": False}, verdicts


def _albertRds():
    D = rdsFromSemifield(PreSemifield.albert(makeField(3, 3), 1))
    return D.params == (27, 27, 27, 1), {"params": list(D.params)}


def _kantorGF8():
    F = makeField(2, 3)
    failing = [z for z in range(1, F.q) if not isPlanar(kantorPlanar(F, [1], [z])).planar]
    return not failing, {"failingZetas": failing}


def _evenMonomialGF16():
    report = searchPlanarMonomials(makeField(2, 4), Convention.EVEN, (5, 5))
    return report.hitExponents() == [5], report.toDict()


def _planeGF3():
    design = designFromSemifield(PreSemifield.fieldProduct(makeField(3)))
    designReport = verifyDesign(design, (3, 3, 3, 1))
    planeReport = verifyPlane(planeFromDesign(design))
    ok = designReport.ok and planeReport.ok and planeReport.order == 3
    return ok, {"design": designReport.toDict(), "plane": planeReport.toDict()}


def _spreadGF4():
    spread = spreadFromSemifield(PreSemifield.fieldProduct(makeField(2, 2)))
    return spread.verify(), {"subspaces": len(spread.subspaces)}


def _negabentTriple():
    disagreements = []
    for value in range(16):
        f = BooleanFunction(2, [(value >> x) & 1 for x in range(4)])
        if not tripleEquivalence(f)["agree"]:
            disagreements.append(value)
    return not disagreements, {"disagreements": disagreements}


def _bentFourBlock():
    f = BooleanFunction.fromMonomials(4, [(0, 1), (2, 3)])
    support = bentSupportDifferenceSet(f)
    h, report = negabentOfFourBlock(binaryGroup(4), support.R, support.R)
    ok = isBent(f) and report["rds"]["ok"] and report["negabent"] and h.m == 5
    return ok, report


FIXTURES: dict[str, Callable] = {
    "example-a": _exampleA,
    "example-b": _exampleB,
    "example-c": _exampleC,
    "projection-example-a": _projectionA,
    "square-planar-gf9": _squareGF9,
    "cm-monomials": _cmMonomials,
    "trinomial-gf27": _trinomialGF27,
    "albert-rds-gf27": _albertRds,
    "kantor-gf8": _kantorGF8,
    "even-monomial-gf16": _evenMonomialGF16,
    "plane-gf3": _planeGF3,
    "spread-gf4": _spreadGF4,
    "negabent-triple-m2": _negabentTriple,
    "bent-four-block": _bentFourBlock,
}


def runFixtures(names: list[str] | None = None) -> list[dict]:
    """Run the named fixtures (all by default); a raised error counts as a failure."""
    results = []
    for name in names or list(FIXTURES):
        if name not in FIXTURES:
            raise ValueError(f"Unknown fixture '{name}'")
        start = monotonic()
        try:
            passed, detail = FIXTURES[name]()
        except Exception as e:
            logger.error(f"Fixture {name} raised {type(e).__name__}: {e}")
            passed, detail = False, {"error": f"{type(e).__name__}: {e}"}
        results.append({"name": name, "passed": bool(passed), "elapsed": round(monotonic() - start, 3),
                        "detail": detail})
        logger.info(f"{name}: {'pass' if passed else 'FAIL'}")
    return results
