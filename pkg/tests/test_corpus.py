import random
from fractions import Fraction

import pytest
from metastability import corpus as corpus_module
from metastability.corpus import (
    GEN_HORIZON,
    MAX_LIPSCHITZ,
    generate_corpus,
    measure_inner_rate,
    random_pwl,
)
from metastability.functions import PwlFunction, check_modulus
from metastability.iterations import IterationRun, Scheme
from metastability.numerics import Caps
from metastability.protocol import Theorem, dumps, loads
from metastability.runner import ScenarioRunner
from metastability.schedules import (
    ConstantSchedule,
    HarmonicSchedule,
    TableRate,
    ZeroRate,
)

F = Fraction


def test_deterministic() -> None:
    first = dumps(generate_corpus(7, 12))
    assert dumps(generate_corpus(7, 12)) == first
    assert dumps(generate_corpus(8, 12)) != first
    assert dumps(loads(first)) == first


def test_ids_rotate_theorems() -> None:
    corpus = generate_corpus(7, 5)
    assert [s.id for s in corpus] == [
        "fmcp-7-0000",
        "km-7-0001",
        "ishikawa-7-0002",
        "lipschitz-7-0003",
        "fmcp-7-0004",
    ]
    assert len({s.id for s in generate_corpus(7, 40)}) == 40


def test_empty_corpus() -> None:
    assert generate_corpus(1, 0) == []


def test_invalid_profile() -> None:
    with pytest.raises(ValueError):
        generate_corpus(1, 3, profile="extreme")


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_pwl(seed: int) -> None:
    rng = random.Random(seed)
    for _ in range(20):
        f = random_pwl(rng)
        assert f.lipschitz_constant() <= MAX_LIPSCHITZ
        assert 2 <= len(f.to_json()) <= 8
        assert random_pwl(rng, monotone=True).is_monotone


@pytest.mark.parametrize("profile", ["easy", "standard", "hard"])
def test_km_hypotheses(profile: str) -> None:
    deltas = [F(1), F(1, 2), F(1, 7), F(1, 1000)]
    for scenario in generate_corpus(3, 10, Theorem.KM, profile):
        assert scenario.omega is not None
        assert check_modulus(scenario.f, scenario.omega, deltas)
        assert scenario.t == HarmonicSchedule()
        if profile == "easy":
            assert scenario.epsilon == F(1, 2)


def test_lipschitz_step_limit() -> None:
    for scenario in generate_corpus(5, 20, Theorem.LIPSCHITZ):
        assert scenario.delta is not None and scenario.t is not None
        L = scenario.f.lipschitz_constant()
        assert 0 < scenario.t.supremum() <= (2 - scenario.delta) / (L + 1)


def test_fmcp_is_monotone() -> None:
    for scenario in generate_corpus(11, 10, Theorem.FMCP):
        assert scenario.f.is_monotone


def test_ishikawa_inner_rate() -> None:
    for scenario in generate_corpus(13, 12, Theorem.ISHIKAWA):
        assert isinstance(scenario.s, ConstantSchedule)
        if scenario.s.t == 0:
            assert scenario.gamma == ZeroRate()
            assert scenario.caps == {}
        elif isinstance(scenario.gamma, TableRate):
            assert scenario.caps == {"horizon": GEN_HORIZON}


def test_measure_inner_rate(tent: PwlFunction) -> None:
    run = IterationRun(
        Scheme.ISHIKAWA, tent, HarmonicSchedule(), ConstantSchedule(F(1, 2)), F(1, 5)
    )
    horizon = 50
    rate = measure_inner_rate(run, [F(1, 4), F(1, 100)], horizon)
    gaps = [abs(v) for v in run.inner_gaps(horizon)]
    for delta, n0 in rate.steps:
        assert all(gap <= delta for gap in gaps[n0:])
        assert n0 == 0 or gaps[n0 - 1] > delta
    assert rate(F(1, 1000)) == horizon


def test_ishikawa_corpus_certifies() -> None:
    report = ScenarioRunner(caps=Caps()).run(generate_corpus(1, 20, Theorem.ISHIKAWA))
    assert report.counts()["skipped"] == 0
    assert report.failed == 0


def test_ishikawa_falls_back_to_zero_inner_step(
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    monkeypatch.setattr(corpus_module, "_inner_rate_certified", lambda *args: False)
    for scenario in generate_corpus(13, 6, Theorem.ISHIKAWA):
        assert scenario.s == ConstantSchedule(F(0))
        assert scenario.gamma == ZeroRate()
        assert scenario.caps == {}
