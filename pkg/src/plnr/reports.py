import json
import logging
import os
from importlib import resources

import jsonschema
import numpy as np

from . import __version__
from .db import insertReport

logger = logging.getLogger(__name__)


def _jsonDefault(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (tuple, set, frozenset)):
        return list(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _schema() -> dict:
    with resources.files("plnr").joinpath("schema/report.schema.json").open() as f:
        return json.load(f)


# ---------------------------------------------------------------------------
# Build / save
# ---------------------------------------------------------------------------

def verdictOf(result: dict) -> bool | None:
    """The headline boolean of a command result, if it has one."""
    for key in ("ok", "planar", "negabent", "bent", "valid", "passed"):
        if isinstance(result.get(key), bool):
            return result[key]
    return None


def buildReport(command: str, job: dict, result: dict, seed: int | None = None,
                elapsed: float | None = None) -> dict:
    """Report envelope holding plain JSON values only (numpy scalars and arrays converted)."""
    envelope = {
        "command": command,
        "version": __version__,
        "job": job,
        "result": result,
        "seed": seed,
        "elapsed": round(elapsed, 3) if elapsed is not None else None,
    }
    return json.loads(json.dumps(envelope, default=_jsonDefault))


def validateReport(report: dict) -> dict:
    """Check a report against the committed schema; raises jsonschema.ValidationError."""
    jsonschema.validate(instance=report, schema=_schema())
    return report


def dumpReport(report: dict) -> str:
    return json.dumps(report, indent=2, default=_jsonDefault)


def saveReport(report: dict, path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write(dumpReport(report))
    logger.info(f"Report ({report.get('command')}) exported to {path}")


def saveReportToDB(report: dict, sqlIP: str | None, sqlPort: int) -> int | None:
    if not sqlIP:
        return None
    reportId = insertReport(report, verdictOf(report["result"]), sqlIP, sqlPort)
    if reportId is None:
        logger.warning("Report was not written to the database")
        return None
    logger.info(f"Report written to DB (report_id={reportId})")
    return reportId


# ---------------------------------------------------------------------------
# Load
# ---------------------------------------------------------------------------

def loadReport(path: str) -> dict | None:
    if not os.path.exists(path):
        return None
    with open(path) as f:
        report = json.load(f)
    try:
        validateReport(report)
    except jsonschema.ValidationError as e:
        logger.error(f"{path} is not a plnr report: {e.message}")
        return None
    logger.info(f"Loaded report from {path}")
    return report
