import json

import pytest

import plnr.__main__ as cli
from plnr.common import InvariantBreach
from plnr.reports import loadReport


def _run(capsys, *argv):
    code = cli.main(["-q", *argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == cli.EXIT_OK else None)


def test_square_over_gf9(capsys):
    code, report = _run(capsys, "planar-verify", "--field", "3^2", "--fn", "2:1")
    assert code == 0
    assert report["command"] == "planar-verify"
    assert report["result"]["planar"] is True
    assert report["result"]["twoToOne"] is True
    assert report["job"]["fieldSpec"] == "3^2"


def test_false_verdict_still_exits_zero(capsys):
    code, report = _run(capsys, "planar-verify", "--field", "3^2", "--fn", "4:1")
    assert code == 0
    assert report["result"]["planar"] is False
    assert report["result"]["failingA"] is not None


def test_rds_verify_z8(capsys):
    code, report = _run(capsys, "rds-verify", "--group", "Z8", "--forbidden", "4", "--set", "1,2,4")
    assert code == 0
    result = report["result"]
    assert result["ok"] is True
    assert (result["m"], result["n"], result["k"], result["lambda"]) == (4, 2, 3, 1)


def test_planar_search(capsys):
    code, report = _run(capsys, "planar-search", "--field", "2^4", "--range", "5..5")
    assert code == 0
    assert [h["d"] for h in report["result"]["hits"]] == [5]
    assert report["result"]["convention"] == "even"


def test_build_then_project(capsys, tmp_path):
    path = tmp_path / "gf4.rds"
    code, report = _run(capsys, "rds-build", "--field", "2^2", "-o", str(path))
    assert code == 0
    assert report["result"]["params"] == [4, 4, 4, 1]
    assert report["result"]["invariants"] == [4, 4]

    code, report = _run(capsys, "rds-project", "-i", str(path), "--subgroup", "(0,1)")
    assert code == 0
    assert report["result"]["params"] == [4, 2, 4, 2]


def test_semifield_check(capsys):
    code, report = _run(capsys, "semifield-check", "--field", "3^3", "--rule", "albert", "--k", "1")
    assert code == 0
    assert report["result"]["ok"] is True
    assert report["result"]["semifield"] is False
    assert report["result"]["commutative"] is True


def test_plane_build(capsys):
    code, report = _run(capsys, "plane-build", "--field", "3")
    assert code == 0
    assert report["result"]["ok"] is True
    assert report["result"]["order"] == 3
    assert report["result"]["points"] == 13


def test_design_from_group(capsys):
    code, report = _run(capsys, "design-build", "--group", "Z8", "--forbidden", "4", "--set", "1,2,4")
    assert code == 0
    assert report["result"]["ok"] is True
    assert report["result"]["params"] == [4, 2, 3, 1]


def test_kantor(capsys):
    code, report = _run(capsys, "kantor", "--field", "2^3", "--chain", "1", "--zetas", "3", "--direction", "1")
    assert code == 0
    result = report["result"]
    assert result["planar"] is True
    assert result["commutative"] is True
    assert result["rds"]["params"] == [8, 8, 8, 1]
    assert result["component"]["negabent"] is True


def test_bent_and_four_block(capsys):
    code, report = _run(capsys, "bent", "--fn", "7888", "--arity", "4")
    assert code == 0
    assert report["result"]["bent"] is True
    assert report["result"]["fourBlock"]["arity"] == 5
    assert report["result"]["fourBlock"]["negabent"] is True


def test_negabent(capsys, tmp_path):
    path = tmp_path / "nega.csv"
    code, report = _run(capsys, "negabent", "--fn", "0", "--arity", "2", "-o", str(path))
    assert code == 0
    assert report["result"]["negabent"] is True
    assert report["result"]["agree"] is True
    assert report["result"]["atZero"] == {"re": 0, "im": 2, "norm": 4}
    assert path.exists()


def test_fixtures_subset(capsys):
    code, report = _run(capsys, "fixtures", "--names", "example-a,square-planar-gf9")
    assert code == 0
    assert report["result"]["passed"] is True
    assert [f["name"] for f in report["result"]["fixtures"]] == ["example-a", "square-planar-gf9"]


def test_report_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, report = _run(capsys, "rds-verify", "--group", "Z8", "--forbidden", "4", "--set", "1,2,4",
                        "--report", str(path))
    assert code == 0
    assert loadReport(str(path)) == report


@pytest.mark.parametrize("argv", [
    ["planar-verify", "--field", "4", "--fn", "2"],
    ["planar-verify", "--field", "3^2"],
    ["rds-verify", "--group", "Q8", "--forbidden", "0", "--set", "1"],
    ["rds-verify", "--group", "Z8", "--forbidden", "4", "--set", "1,1,2"],
    ["kantor", "--field", "2^4", "--chain", "1"],
    ["fixtures", "--names", "no-such-fixture"],
])
def test_usage_errors_exit_one(capsys, argv):
    code, _ = _run(capsys, *argv)
    assert code == cli.EXIT_USAGE


def test_argparse_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["planar-prove"])
    assert info.value.code == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        cli.main(["planar-search", "--range", "5-7"])
    assert info.value.code == cli.EXIT_USAGE


def test_internal_errors_exit_two(capsys, monkeypatch):
    class Broken:
        def __init__(self, job):
            pass

        def run(self):
            raise InvariantBreach("census disagrees with itself")

    monkeypatch.setattr(cli, "Engine", Broken)
    code, _ = _run(capsys, "fixtures")
    assert code == cli.EXIT_INTERNAL
