import json

import pytest

from linfcourant import cli
from linfcourant.report import CheckReport

SCENARIO = "[scenario]\ndim = 3\nr = 2\nsigma = dx1^dx2^dx3\nsamples = 20\nseed = 3\n"


@pytest.fixture
def scenario_file(tmp_path):
    p = tmp_path / "s.ini"
    p.write_text(SCENARIO)
    return p


def test_parse_form_echo(capsys):
    assert cli.main(["parse-form", "x1*dx2 + 2/4*dx2*0 + dx1^dx1", "--dim", "3"]) == 2
    assert cli.main(["parse-form", "2/4*x1*dx2 + dx1^dx1", "--dim", "3"]) == 0
    assert capsys.readouterr().out.strip() == "1/2*x1*dx2"


def test_parse_form_errors(capsys):
    assert cli.main(["parse-form", "dx4", "--dim", "3"]) == 2
    assert "position 0" in capsys.readouterr().err


def test_usage_errors(scenario_file):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["parse-form", "dx1"])
    assert exc.value.code == 2
    assert cli.main(["verify", str(scenario_file), "--suites", "foo"]) == 2
    assert cli.main(["verify", "/nonexistent.ini"]) == 2


def test_unknown_suite_writes_no_report(scenario_file, tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["verify", str(scenario_file), "--suites", "cartan,foo", "--out", str(out)]) == 2
    assert not out.exists()


def test_verify_pass(scenario_file, tmp_path):
    out = tmp_path / "r.json"
    code = cli.main(["verify", str(scenario_file), "--suites", "cartan,chi-beta", "--seed", "5",
                     "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["passed"] and data["scenario"]["seed"] == 5
    assert [s["name"] for s in data["suites"]] == ["cartan", "chi-beta"]


def test_verify_stdout(scenario_file, capsys):
    assert cli.main(["verify", str(scenario_file), "--suites", "mc-twist"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"]


def test_verify_failure_exit_code(scenario_file, monkeypatch, capsys):
    from linfcourant import harness

    def broken(sc, sampler):
        rep = CheckReport("cartan")
        rep.record("forced", False, arity=1, inputs=[], lhs="1", rhs="0")
        return rep

    monkeypatch.setitem(harness._RUNNERS, "cartan", broken)
    assert cli.main(["verify", str(scenario_file), "--suites", "cartan"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["failure_count"] == 1
    assert data["suites"][0]["failures"][0]["suite"] == "cartan"
