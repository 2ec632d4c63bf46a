import json

import pytest

from linfcourant.errors import InvalidInputError, ParseError
from linfcourant.harness import SUITES, Scenario, parse_scenario, run, suite_seed


def scenario(**kw):
    base = dict(dim=3, r=2, sigma="dx1^dx2^dx3", samples=30, seed=1)
    base.update(kw)
    return Scenario(**base)


def test_parse_scenario_defaults():
    sc = parse_scenario("[scenario]\ndim = 4\nr = 1\nseed = 9\nsuites = cartan, mc-twist\n")
    assert (sc.dim, sc.r, sc.seed, sc.suites) == (4, 1, 9, ["cartan", "mc-twist"])
    sc.validate()
    assert sc.sigma == "dx1^dx2"


@pytest.mark.parametrize("text", [
    "dim = 3\n", "[scenario]\ncolour = red\n", "[scenario]\ndim = three\n", "[scenario\n",
])
def test_parse_scenario_errors(text):
    with pytest.raises(ParseError):
        parse_scenario(text)


@pytest.mark.parametrize("kw", [
    dict(suites=["foo"]), dict(sigma="x4*dx1^dx2^dx3", dim=4), dict(sigma="dx1^dx2"),
    dict(dim=2), dict(seed=-1), dict(samples=0), dict(r=0), dict(beta="dx1"),
])
def test_validate_rejects(kw):
    with pytest.raises(InvalidInputError):
        scenario(**kw).validate()


def test_suite_seed_independent():
    seeds = {suite_seed(1, s) for s in SUITES}
    assert len(seeds) == len(SUITES)
    assert suite_seed(1, "cartan") == suite_seed(1, "cartan") != suite_seed(2, "cartan")


def test_cartan_suite_counts():
    out = run(scenario(suites=["cartan"], samples=100))
    (entry,) = out["suites"]
    assert entry["checks_run"] >= 600 and entry["failure_count"] == 0 and out["passed"]


def test_gauge_suite_passes():
    out = run(scenario(suites=["gauge-identity"]))
    assert out["passed"] and out["failure_count"] == 0


def _strip(report):
    for s in report["suites"]:
        s.pop("wall_time")
    return json.dumps(report, sort_keys=True)


def test_determinism():
    sc = dict(suites=["cartan", "rogers-linfty", "comomentum"])
    assert _strip(run(scenario(**sc))) == _strip(run(scenario(**sc)))
    assert _strip(run(scenario(**sc))) != _strip(run(scenario(seed=2, **sc)))


def test_full_default_scenario():
    out = run(scenario(samples=40))
    assert [s["name"] for s in out["suites"]] == list(SUITES)
    assert out["passed"], [(s["name"], s["failures"][:1]) for s in out["suites"] if not s["passed"]]
    json.dumps(out)


def test_r1_and_r3_scenarios():
    assert run(scenario(r=1, sigma="dx1^dx2 + x3*dx1^dx3", samples=30)).get("passed")
    out = run(scenario(dim=4, r=3, sigma="dx1^dx2^dx3^dx4", samples=20,
                       suites=["courant-linfty", "chi-beta", "comomentum", "courant-chain-map"]))
    assert out["passed"]


def test_report_schema():
    out = run(scenario(suites=["mc-twist"]))
    assert set(out) == {"scenario", "suites", "checks_run", "failure_count", "passed"}
    (entry,) = out["suites"]
    assert set(entry) >= {"name", "checks_run", "failure_count", "failures", "info", "passed", "wall_time"}
