import json

import jsonschema
import numpy as np
import pytest

from plnr import __version__
from plnr import reports
from plnr.jobSpec import JobSpec
from plnr.reports import buildReport, dumpReport, loadReport, saveReport, saveReportToDB, validateReport, verdictOf


def _report(**result):
    return buildReport("planar-search", JobSpec("planar-search", fieldSpec="2^4").toDict(), result,
                       seed=1, elapsed=0.12345)


def test_envelope_is_plain_json():
    report = _report(hits=[{"d": np.int64(5), "cs": np.arange(3), "method": "coset"}],
                     ok=np.bool_(True), pair=(1, 2))
    assert report["version"] == __version__
    assert report["elapsed"] == 0.123
    assert report["result"]["hits"][0] == {"d": 5, "cs": [0, 1, 2], "method": "coset"}
    assert report["result"]["ok"] is True
    assert report["result"]["pair"] == [1, 2]
    assert json.loads(dumpReport(report)) == report
    validateReport(report)


def test_schema_rejects_bad_reports():
    report = _report(ok=True)
    with pytest.raises(jsonschema.ValidationError):
        validateReport({k: v for k, v in report.items() if k != "seed"})
    with pytest.raises(jsonschema.ValidationError):
        validateReport(report | {"command": "planar-prove"})
    with pytest.raises(jsonschema.ValidationError):
        validateReport(report | {"extra": 1})


def test_unserialisable_values_fail():
    with pytest.raises(TypeError):
        _report(thing=object())


def test_verdict_of():
    assert verdictOf({"planar": False}) is False
    assert verdictOf({"ok": True, "planar": False}) is True
    assert verdictOf({"hits": []}) is None


def test_save_and_load(tmp_path):
    report = _report(ok=True)
    path = tmp_path / "nested" / "report.json"
    saveReport(report, str(path))
    assert loadReport(str(path)) == report
    assert loadReport(str(tmp_path / "missing.json")) is None

    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"command": "fixtures"}))
    assert loadReport(str(broken)) is None


def test_database_export(monkeypatch):
    calls = {}

    def fakeInsertReport(report, verdict, sqlIP, sqlPort):
        calls["report"] = (report["command"], verdict, sqlIP, sqlPort)
        return 17

    monkeypatch.setattr(reports, "insertReport", fakeInsertReport)

    report = _report(field="2^4", convention="even", hits=[{"d": 5, "cs": [1], "method": "coset"}])
    assert saveReportToDB(report, None, 5432) is None
    assert "report" not in calls
    assert saveReportToDB(report, "db.local", 5433) == 17
    assert calls["report"] == ("planar-search", None, "db.local", 5433)


def test_database_failure_is_not_fatal(monkeypatch):
    monkeypatch.setattr(reports, "insertReport", lambda *args: None)
    assert saveReportToDB(_report(ok=True), "db.local", 5432) is None
