import json
from typing import List

import pytest
from metastability import runner as runner_module
from metastability.numerics import CapExceededError, Caps
from metastability.oracle import Outcome, Status
from metastability.protocol import Scenario, load
from metastability.runner import ScenarioRunner, compute_bound, verify_scenario


@pytest.fixture
def scenarios(smoke_file: str) -> List[Scenario]:
    return load(smoke_file)


def test_smoke(scenarios: List[Scenario]) -> None:
    report = ScenarioRunner(caps=Caps()).run(scenarios)
    assert [e.id for e in report.entries] == [
        "smoke-ishikawa-identity",
        "smoke-km-identity",
        "smoke-lipschitz-tent",
    ]
    assert [e.outcome.bound for e in report.entries] == [288, 336, 0]
    assert all(e.status == Status.SOUND for e in report.entries)
    assert report.counts()["total"] == 3


def test_failure_is_isolated(
    monkeypatch: pytest.MonkeyPatch, scenarios: List[Scenario]
) -> None:
    def verify(scenario: Scenario, caps: Caps) -> Outcome:
        if scenario.id == "smoke-km-identity":
            raise RuntimeError("boom")
        if scenario.id == "smoke-lipschitz-tent":
            raise CapExceededError("P_3 bit length", 8)
        return verify_scenario(scenario, caps)

    monkeypatch.setattr(runner_module, "verify_scenario", verify)
    report = ScenarioRunner(caps=Caps()).run(scenarios)
    statuses = {e.id: e.status for e in report.entries}
    assert statuses == {
        "smoke-ishikawa-identity": Status.SOUND,
        "smoke-km-identity": Status.FAILED,
        "smoke-lipschitz-tent": Status.BOUND_ONLY,
    }
    assert report.entries[1].outcome.reason == "RuntimeError: boom"
    assert report.failed == 1


def test_parallel_matches_serial(scenarios: List[Scenario]) -> None:
    serial = ScenarioRunner(jobs=1, caps=Caps()).run(scenarios)
    parallel = ScenarioRunner(jobs=2, caps=Caps()).run(scenarios)
    assert parallel.dumps() == serial.dumps()


def test_empty_batch() -> None:
    report = ScenarioRunner(jobs=3, caps=Caps()).run([])
    assert report.entries == []
    assert report.counts()["total"] == 0


def test_timings(scenarios: List[Scenario]) -> None:
    report = ScenarioRunner(caps=Caps(), timings=True).run(scenarios[:1])
    assert "wall_time" in report.to_json()["entries"][0]


def test_caps_for(scenarios: List[Scenario]) -> None:
    scenario = scenarios[0]
    scenario.caps = {"horizon": 400, "search": 30}
    runner = ScenarioRunner(caps=Caps(nat_bits=64), search=20, horizon=None)
    caps = runner.caps_for(scenario)
    assert (caps.nat_bits, caps.horizon, caps.search) == (64, 400, 20)


def test_invalid_jobs() -> None:
    with pytest.raises(ValueError):
        ScenarioRunner(jobs=0)


def test_caps_from_env(monkeypatch: pytest.MonkeyPatch, clean_env: None) -> None:
    monkeypatch.setenv("METASTABILITY_HORIZON", "77")
    assert ScenarioRunner().caps.horizon == 77


def test_compute_bound(scenarios: List[Scenario]) -> None:
    results = [compute_bound(s, Caps()) for s in scenarios]
    assert [r["bound"] for r in results] == ["336", "288", "0"]
    assert results[0]["trace"]["u0"] == "48"
    assert results[1]["trace"]["u0"] == "0"
    assert results[2]["trace"]["T"] == "4"
    assert results[2]["epsilon"] == "1/2"
    json.dumps(results)


def test_render_bound(scenarios: List[Scenario]) -> None:
    runner = ScenarioRunner(caps=Caps())
    text = runner.render("bound.txt.j2", compute_bound(scenarios[0], Caps()))
    lines = text.splitlines()
    assert lines[0] == "smoke-km-identity (km, epsilon = 1/2)"
    assert "  bound: 336" in lines
    assert "  phi: 336" in lines
    assert "  u: 289 values, 48, 49, 50, ..., 336" in lines


def test_render_summary(scenarios: List[Scenario]) -> None:
    runner = ScenarioRunner(caps=Caps())
    report = runner.run(scenarios)
    text = runner.render("summary.txt.j2", dict(report=report.to_json()))
    assert text.splitlines()[-1] == (
        "3 scenarios: 3 sound, 0 skipped, 0 bound-only, 0 failed"
    )
    assert "smoke-km-identity" in text
    assert "bound=336 least_n=0" in text
