import pytest

from plnr.fixtures import FIXTURES, runFixtures


def test_every_fixture_passes():
    results = runFixtures()
    assert [r["name"] for r in results] == list(FIXTURES)
    failed = [r for r in results if not r["passed"]]
    assert not failed, failed


def test_errors_count_as_failures(monkeypatch):
    def broken():
        raise ZeroDivisionError("boom")

    monkeypatch.setitem(FIXTURES, "broken", broken)
    [result] = runFixtures(["broken"])
    assert not result["passed"]
    assert result["detail"]["error"] == "ZeroDivisionError: boom"


def test_unknown_fixture():
    with pytest.raises(ValueError):
        runFixtures(["nope"])
