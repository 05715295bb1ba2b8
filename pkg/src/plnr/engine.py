import logging
from time import monotonic

import numpy as np

from .common import (
    Convention,
    COMMUTATIVITY_SCAN_LIMIT,
    MAX_CENSUS_ORDER,
    MAX_QUOTIENT_ORDER,
    NotDifferenceSet,
    PRODUCT_TABLE_LIMIT,
)
from .components import (
    isBent,
    isNegabent,
    negaSpectrumValue,
    negabentFromProjection,
    negabentOfFourBlock,
    binaryGroup,
    tripleEquivalence,
    walshSpectrum,
)
from .designs import (
    IncidenceStructure,
    designFromRds,
    designFromSemifield,
    dual,
    fingerprint,
    planeFromDesign,
    verifyDesign,
    verifyPlane,
)
from .fixtures import runFixtures
from .formats import (
    loadIncidence,
    loadSemifield,
    parseElements,
    parseFieldSpec,
    parseGroupSpec,
    parsePolySpec,
    readRdsFile,
    saveIncidence,
    saveNegaSpectrum,
    saveRds,
    saveSemifield,
    saveSpread,
    truthTableFromHex,
    truthTableToHex,
)
from .funcMaps import classify
from .gf import FiniteField
from .groups import abelianInvariants, elementOrderCensus, subgroupClosure
from .jobSpec import JobSpec
from .planar import isPlanarEven, isPlanarOdd, kantorPlanar, searchPlanarMonomials, twoToOne
from .rds import (
    RelativeDifferenceSet,
    projectRds,
    rdsFromPlanar,
    rdsFromSemifield,
    verifyRds,
)
from .reports import buildReport, saveReport, saveReportToDB
from .semifield import (
    PreSemifield,
    checkAxioms,
    presemifieldFromPlanarEven,
    presemifieldFromPlanarOdd,
    rowsArePermutations,
    spreadFromSemifield,
    toSemifield,
)

logger = logging.getLogger(__name__)


class Engine:
    def __init__(self, job: JobSpec):
        self.job = job
        self.options = job.options
        self.report: dict | None = None

# ------------------------------------------------------------------
# Inputs
# ------------------------------------------------------------------

    def _require(self, name: str, value):
        if value is None or value == "":
            raise ValueError(f"{self.job.command} needs --{name}")
        return value

    def _field(self) -> FiniteField:
        return parseFieldSpec(self._require("field", self.job.fieldSpec))

    def _function(self, F: FiniteField):
        return parsePolySpec(F, self._require("fn", self.job.fnSpec))

    def _boolean(self):
        return truthTableFromHex(self._require("fn", self.job.fnSpec), self._require("arity", self.job.arity))

    def _semifield(self) -> PreSemifield:
        if self.job.inputPath:
            S = loadSemifield(self.job.inputPath)
        else:
            F = self._field()
            rule = self.options.get("rule") or ("planar" if self.job.fnSpec else "field")
            k = int(self.options.get("k", 1))
            if rule == "field":
                S = PreSemifield.fieldProduct(F)
            elif rule == "albert":
                S = PreSemifield.albert(F, k)
            elif rule == "twisted":
                S = PreSemifield.twistedField(F, k)
            elif rule == "planar":
                f = self._function(F)
                S = presemifieldFromPlanarEven(f) if F.p == 2 else presemifieldFromPlanarOdd(f)
            else:
                raise ValueError(f"Unknown product rule '{rule}' (expected field, albert, twisted or planar)")
        if self.options.get("identity") is not None:
            S = toSemifield(S, int(self.options["identity"]))
        return S

    def _rdsParts(self):
        if self.job.inputPath:
            return readRdsFile(self.job.inputPath)
        group = parseGroupSpec(self._require("group", self.job.groupSpec))
        forbidden = subgroupClosure(group, parseElements(group, self._require("forbidden", self.job.forbidden)))
        return group, forbidden, parseElements(group, self._require("set", self.job.elements))

    def _rds(self) -> RelativeDifferenceSet:
        group, forbidden, R = self._rdsParts()
        verdict = verifyRds(group, forbidden, R, self.job.threads)
        if not verdict.ok:
            raise NotDifferenceSet(f"Input is not a relative difference set in {group.spec}: {verdict.violations}")
        return RelativeDifferenceSet(group=group, forbidden=forbidden, R=np.unique(R), params=verdict.params,
                                     source=self.job.inputPath or "command line")

    def _builtRds(self) -> RelativeDifferenceSet:
        if self.job.fnSpec and self.options.get("rule") in (None, "planar"):
            return rdsFromPlanar(self._function(self._field()))
        return rdsFromSemifield(self._semifield())

    @staticmethod
    def _groupSummary(D: RelativeDifferenceSet) -> dict:
        summary = {"group": D.group.spec, "order": D.group.order}
        if D.group.order <= MAX_CENSUS_ORDER:
            summary["orderCensus"] = {str(k): v for k, v in elementOrderCensus(D.group).items()}
        if D.group.order <= COMMUTATIVITY_SCAN_LIMIT:
            summary["abelian"] = D.group.isAbelian
            if summary["abelian"]:
                summary["invariants"] = abelianInvariants(D.group)
        return summary

# ------------------------------------------------------------------
# Planar functions
# ------------------------------------------------------------------

    def planarVerify(self) -> dict:
        F = self._field()
        f = self._function(F)
        convention = self.job.convention
        if convention == str(Convention.ODD):
            verdict = isPlanarOdd(f, self.job.threads)
        elif convention == str(Convention.EVEN):
            verdict = isPlanarEven(f, self.job.threads)
        else:
            verdict = isPlanarEven(f, self.job.threads) if F.p == 2 else isPlanarOdd(f, self.job.threads)
        result = verdict.toDict() | {"field": F.spec, "class": classify(f).toDict()}
        if F.p != 2:
            result["twoToOne"] = twoToOne(f)
        return result

    def planarSearch(self) -> dict:
        F = self._field()
        convention = Convention.fromString(self.job.convention) if self.job.convention \
            else (Convention.EVEN if F.p == 2 else Convention.ODD)
        report = searchPlanarMonomials(F, convention, self.job.dRange,
                                       restrict=not self.options.get("noRestrict", False),
                                       threads=self.job.threads)
        return report.toDict()

    def kantor(self) -> dict:
        F = self._field()
        chain = [int(d) for d in self.options.get("chain") or [1]]
        zetas = [int(z) for z in self.options.get("zetas") or [1] * len(chain)]

        logger.info(f"Step 1: building the map over {F} with chain {chain}")
        f = kantorPlanar(F, chain, zetas)
        verdict = isPlanarEven(f, self.job.threads)
        result = {"field": F.spec, "chain": chain, "zetas": zetas} | verdict.toDict()
        if not verdict.planar:
            return result

        logger.info("Step 2: commutative pre-semifield")
        S = presemifieldFromPlanarEven(f)
        axioms = checkAxioms(S, seed=self.job.seed)
        result["axioms"] = axioms.toDict()
        result["commutative"] = S.commutative

        if F.q <= PRODUCT_TABLE_LIMIT:
            logger.info("Step 3: difference set")
            D = rdsFromPlanar(f)
            result["rds"] = {"params": list(D.params)}
            direction = self.options.get("direction")
            if direction is not None and D.group.order <= MAX_QUOTIENT_ORDER:
                logger.info(f"Step 4: component in direction {direction}")
                h, component = negabentFromProjection(D, int(direction))
                result["component"] = component | {"standardForm": truthTableToHex(h)}
        return result

# ------------------------------------------------------------------
# Semifields and spreads
# ------------------------------------------------------------------

    def semifieldBuild(self) -> dict:
        S = self._semifield()
        axioms = checkAxioms(S, samples=self.job.samples, seed=self.job.seed)
        if self.job.outputPath:
            saveSemifield(S, self.job.outputPath)
        return {"field": S.field.spec, "rule": str(S.ruleTag), "commutative": S.commutative,
                "axioms": axioms.toDict(), "ok": axioms.presemifield, "warnings": S.warnings}

    def semifieldCheck(self) -> dict:
        S = self._semifield()
        axioms = checkAxioms(S, samples=self.job.samples, seed=self.job.seed)
        return {"field": S.field.spec, "rule": str(S.ruleTag), "axioms": axioms.toDict(),
                "ok": axioms.presemifield, "semifield": axioms.semifield,
                "commutative": S.commutative, "rowsArePermutations": rowsArePermutations(S)}

    def spread(self) -> dict:
        spread = spreadFromSemifield(self._semifield())
        valid = spread.verify()
        if self.job.outputPath:
            saveSpread(spread, self.job.outputPath)
        return {"p": spread.p, "n": spread.n, "subspaces": len(spread.subspaces), "valid": valid}

# ------------------------------------------------------------------
# Difference sets
# ------------------------------------------------------------------

    def rdsBuild(self) -> dict:
        D = self._builtRds()
        if self.job.outputPath:
            saveRds(D, self.job.outputPath)
        return {"ok": True, "params": list(D.params), "source": D.source} | self._groupSummary(D)

    def rdsVerify(self) -> dict:
        group, forbidden, R = self._rdsParts()
        return verifyRds(group, forbidden, R, self.job.threads).toDict() | {"group": group.spec}

    def rdsProject(self) -> dict:
        D = self._rds()
        U = parseElements(D.group, self._require("subgroup", self.options.get("subgroup")))
        P = projectRds(D, U)
        if self.job.outputPath:
            saveRds(P, self.job.outputPath)
        return {"ok": True, "from": list(D.params), "params": list(P.params), "group": P.group.spec,
                "R": P.elements()}

# ------------------------------------------------------------------
# Designs and planes
# ------------------------------------------------------------------

    def _design(self) -> IncidenceStructure:
        if self.job.groupSpec or (self.job.inputPath and self.options.get("source") == "rds"):
            I = designFromRds(self._rds())
        else:
            I = designFromSemifield(self._semifield())
        return dual(I) if self.options.get("dual") else I

    def designBuild(self) -> dict:
        I = self._design()
        report = verifyDesign(I, threads=self.job.threads)
        if self.job.outputPath:
            saveIncidence(I, self.job.outputPath, report.params)
        return report.toDict() | {"points": I.numPoints, "lines": I.numLines, "fingerprint": fingerprint(I)}

    def designVerify(self) -> dict:
        I, report = loadIncidence(self._require("input", self.job.inputPath))
        return report.toDict() | {"points": I.numPoints, "lines": I.numLines}

    def planeBuild(self) -> dict:
        logger.info("Step 1: divisible design")
        I = self._design()
        logger.info("Step 2: adjoining the points and lines at infinity")
        plane = planeFromDesign(I)
        report = verifyPlane(plane, samples=self.job.samples, seed=self.job.seed, threads=self.job.threads)
        if self.job.outputPath:
            saveIncidence(plane, self.job.outputPath)
        return report.toDict() | {"points": plane.numPoints, "lines": plane.numLines}

    def planeVerify(self) -> dict:
        I, report = loadIncidence(self._require("input", self.job.inputPath))
        return report.toDict() | {"points": I.numPoints, "lines": I.numLines}

# ------------------------------------------------------------------
# Boolean components
# ------------------------------------------------------------------

    def negabent(self) -> dict:
        f = self._boolean()
        if self.job.outputPath:
            saveNegaSpectrum(f, self.job.outputPath)
        value = negaSpectrumValue(f, 0)
        return tripleEquivalence(f) | {"arity": f.m, "atZero": {"re": value.re, "im": value.im, "norm": value.norm()}}

    def bent(self) -> dict:
        f = self._boolean()
        bent = isBent(f)
        result = {"arity": f.m, "bent": bent, "walsh": [int(v) for v in walshSpectrum(f)]}
        if bent and self.options.get("fourBlock", True):
            support = [x for x in range(1 << f.m) if f.table[x]]
            h, report = negabentOfFourBlock(binaryGroup(f.m), support, support)
            result["fourBlock"] = report | {"arity": h.m, "function": truthTableToHex(h),
                                            "negabent": isNegabent(h)}
        return result

    def fixtures(self) -> dict:
        results = runFixtures(self.options.get("names"))
        return {"passed": all(r["passed"] for r in results), "fixtures": results}

# ------------------------------------------------------------------
# Run
# ------------------------------------------------------------------

    def run(self) -> dict:
        modes = {
            "planar-verify":   self.planarVerify,
            "planar-search":   self.planarSearch,
            "semifield-build": self.semifieldBuild,
            "semifield-check": self.semifieldCheck,
            "rds-build":       self.rdsBuild,
            "rds-verify":      self.rdsVerify,
            "rds-project":     self.rdsProject,
            "design-build":    self.designBuild,
            "design-verify":   self.designVerify,
            "plane-build":     self.planeBuild,
            "plane-verify":    self.planeVerify,
            "negabent":        self.negabent,
            "bent":            self.bent,
            "kantor":          self.kantor,
            "spread":          self.spread,
            "fixtures":        self.fixtures,
        }
        start = monotonic()
        result = modes[self.job.command]()
        self.report = buildReport(self.job.command, self.job.toDict(), result,
                                  seed=self.job.seed, elapsed=monotonic() - start)
        self._exportReport()
        return self.report

    def _exportReport(self) -> None:
        reportPath = self.options.get("reportPath")
        if reportPath:
            saveReport(self.report, reportPath)
        saveReportToDB(self.report, self.job.sqlIP, self.job.sqlPort)
