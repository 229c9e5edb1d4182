from fractions import Fraction
from typing import List

import pytest
from hypothesis import given, settings
from metastability.functions import PwlFunction
from metastability.iterations import Scheme, run_iteration
from metastability.numerics import Caps
from metastability.oracle import (
    LEMMA_HORIZON,
    InsufficientLengthError,
    MetaVerdict,
    Status,
    check_lemma_dl1,
    check_lemma_dl3,
    least_metastable,
    least_metastable_naive,
    monotone_hypothesis,
    needed_horizon,
    verify_fmcp,
    verify_ishikawa_theorem,
    verify_km_theorem,
    verify_lipschitz_theorem,
    verify_monotone_bound,
)
from metastability.schedules import (
    ConstantCounter,
    ConstantSchedule,
    CounterFunc,
    HarmonicRate,
    HarmonicSchedule,
    IdentityCounter,
    LinearModulus,
    ParamSchedule,
    TableCounter,
    ZeroRate,
    capped_identity,
)

from tests.strategies import fractions, pwl_functions, schedules

F = Fraction
HALF = F(1, 2)
OMEGA = LinearModulus(F(1))
HALF_STEP = ConstantSchedule(HALF)
HARMONIC = HarmonicSchedule()
OSCILLATOR = [F(n % 2) for n in range(60)]
# Contracts by 1/2 towards 1/2 and slopes 1/2, so every run is monotone.
SHRINK = PwlFunction([(0, F(1, 4)), (1, F(3, 4))])


@pytest.mark.parametrize(
    "xs, g, expected",
    [
        ([F(0), F(1), F(1), F(1)], ConstantCounter(1), 1),
        ([F(0), F(1), F(1), F(1)], ConstantCounter(0), 0),
        ([F(0), F(1, 4), F(1, 2), F(1, 2)], ConstantCounter(1), 0),
        ([F(0), F(1), F(0), F(1), F(1, 2), F(1, 2)], ConstantCounter(1), 3),
    ],
)
def test_least_metastable(xs: List[Fraction], g: CounterFunc, expected: int) -> None:
    found = least_metastable(xs, HALF, g, 4)
    assert found.least_n == expected
    assert found.searched == expected + 1
    assert len(found.witnesses) == expected
    for w in found.witnesses:
        assert w.N <= w.i < w.j <= w.N + g(w.N)
        assert w.gap == abs(xs[w.i] - xs[w.j]) > HALF


def test_least_metastable_oscillator() -> None:
    found = least_metastable(OSCILLATOR, HALF, ConstantCounter(1), 50)
    assert found.least_n is None
    assert found.searched == 51
    assert len(found.witnesses) == 51
    assert least_metastable_naive(OSCILLATOR, HALF, ConstantCounter(1), 50) is None
    # Every window is metastable once epsilon reaches the diameter.
    assert least_metastable(OSCILLATOR, F(1), ConstantCounter(1), 50).least_n == 0


def test_least_metastable_short_sequence() -> None:
    with pytest.raises(InsufficientLengthError):
        least_metastable(OSCILLATOR[:10], HALF, ConstantCounter(1), 20)
    with pytest.raises(InsufficientLengthError):
        least_metastable_naive(OSCILLATOR[:10], HALF, ConstantCounter(1), 20)
    # The answer is found before the short window is reached.
    assert least_metastable([F(0)] * 3, HALF, ConstantCounter(2), 5).least_n == 0


@settings(max_examples=60, deadline=None)
@given(pwl_functions(), schedules(), fractions(), fractions(max_den=4))
def test_search_matches_naive(
    f: PwlFunction, t: ParamSchedule, x0: Fraction, epsilon: Fraction
) -> None:
    epsilon = epsilon or F(1, 8)
    g = capped_identity(3)
    xs = run_iteration(Scheme.KM, f, t, None, x0, 40).xs
    found = least_metastable(xs, epsilon, g, 30)
    assert found.least_n == least_metastable_naive(xs, epsilon, g, 30)
    if found.least_n is not None:
        # Minimality: every earlier candidate was rejected with a witness.
        assert [w.N for w in found.witnesses] == list(range(found.least_n))


@pytest.mark.parametrize(
    "bound, g, expected",
    [
        (5, ConstantCounter(0), 6),
        (5, IdentityCounter(), 11),
        (3, TableCounter((5, 0, 0, 0), ConstantCounter(0)), 6),
    ],
)
def test_needed_horizon(bound: int, g: CounterFunc, expected: int) -> None:
    assert needed_horizon(bound, g) == expected


def test_meta_verdict() -> None:
    assert MetaVerdict(3, 5).sound
    assert not MetaVerdict(6, 5).sound
    assert not MetaVerdict(None, 5).sound
    assert MetaVerdict(None, 5).to_json() == dict(
        least_n=None, bound="5", sound=False, rejected=0
    )


def test_verify_monotone_bound() -> None:
    xs = [F(0)] + [F(1)] * 9
    verdict = verify_monotone_bound(xs, HALF, ConstantCounter(1))
    assert verdict
    assert verdict.reason == "N = 1"
    assert not verify_monotone_bound(OSCILLATOR, HALF, ConstantCounter(1))
    with pytest.raises(InsufficientLengthError):
        verify_monotone_bound(xs[:3], HALF, ConstantCounter(1))


@pytest.mark.parametrize(
    "f, x, t, delta",
    [
        (PwlFunction.identity(), F(1, 3), F(1, 2), HALF),
        (PwlFunction.reflection(), F(0), F(1, 4), HALF),
        (PwlFunction.reflection(), F(0), F(3, 4), HALF),
        (PwlFunction.tent(), F(1), F(1, 2), HALF),
        (PwlFunction.tent(), F(3, 4), F(1, 4), HALF),
    ],
)
def test_check_lemma_dl1(
    f: PwlFunction, x: Fraction, t: Fraction, delta: Fraction
) -> None:
    assert check_lemma_dl1(f, x, t, delta)


def test_check_lemma_dl1_explicit_point(reflection: PwlFunction) -> None:
    # x* = 1/4 does not reach the fixed point 1/2 yet.
    verdict = check_lemma_dl1(reflection, F(0), F(1, 4), HALF, p=HALF)
    assert verdict
    assert verdict.checked == 1
    with pytest.raises(ValueError):
        check_lemma_dl1(reflection, F(0), F(1, 4), HALF, p=F(1, 3))
    with pytest.raises(ValueError):
        check_lemma_dl1(reflection, F(0), F(1), HALF)


def test_check_lemma_dl3_no_switch(identity: PwlFunction) -> None:
    run = run_iteration(Scheme.KM, identity, HarmonicSchedule(), None, F(1, 3), 20)
    verdict = check_lemma_dl3(run, HALF)
    assert verdict
    assert verdict.reason == "no finite switching pair"


def test_check_lemma_dl3_tent(tent: PwlFunction) -> None:
    t = ConstantSchedule(F(1, 4))
    run = run_iteration(Scheme.KM, tent, t, None, F(1, 8), 40)
    assert check_lemma_dl3(run, HALF)


def test_check_lemma_dl3_oscillating(reflection: PwlFunction) -> None:
    # t = 3/4 = (2 - 1/2)/(1 + 1); the run switches direction at every step.
    t = ConstantSchedule(F(3, 4))
    run = run_iteration(Scheme.KM, reflection, t, None, F(0), 30)
    assert run.xs[1:4] == [F(3, 4), F(3, 8), F(9, 16)]
    verdict = check_lemma_dl3(run, HALF)
    assert verdict
    assert verdict.reason is None
    assert verdict.checked > 0


def test_check_lemma_dl3_skips_large_steps(reflection: PwlFunction) -> None:
    run = run_iteration(Scheme.PICARD, reflection, None, None, F(0), 20)
    verdict = check_lemma_dl3(run, HALF)
    assert verdict
    assert verdict.checked == 0
    ishikawa = run_iteration(
        Scheme.ISHIKAWA, reflection, HarmonicSchedule(), HALF_STEP, F(0), 5
    )
    with pytest.raises(ValueError):
        check_lemma_dl3(ishikawa, HALF)


def test_monotone_hypothesis(tent: PwlFunction, reflection: PwlFunction) -> None:
    assert monotone_hypothesis(Scheme.ISHIKAWA, SHRINK, HarmonicSchedule())
    assert monotone_hypothesis(Scheme.KM, reflection, ConstantSchedule(HALF))
    assert not monotone_hypothesis(Scheme.PICARD, reflection, ConstantSchedule(F(1)))
    assert not monotone_hypothesis(Scheme.KM, tent, HarmonicSchedule())


def test_verify_km_identity(identity: PwlFunction) -> None:
    outcome = verify_km_theorem(
        identity, HARMONIC, F(1, 3), HALF, ConstantCounter(0), OMEGA, HarmonicRate()
    )
    assert outcome.status == Status.SOUND
    assert outcome.bound == 336
    assert outcome.least_n == 0
    assert all(outcome.hypotheses.values())


def test_verify_km_reflection(reflection: PwlFunction) -> None:
    outcome = verify_km_theorem(
        reflection, HARMONIC, F(0), HALF, ConstantCounter(1), OMEGA, HarmonicRate()
    )
    assert outcome.status == Status.SOUND
    # x = 0, 1, 1/2, 1/2, ...
    assert outcome.least_n == 1
    assert outcome.bound == 718
    data = outcome.to_json()
    assert data["status"] == "sound"
    assert data["meta"]["least_n"] == "1"
    assert data["meta"]["rejected"] == 1


def test_verify_km_bad_modulus(tent: PwlFunction) -> None:
    outcome = verify_km_theorem(
        tent, HARMONIC, F(1, 5), HALF, ConstantCounter(1), OMEGA, HarmonicRate()
    )
    assert outcome.status == Status.SKIPPED
    assert outcome.reason == "hypothesis: omega"
    assert outcome.bound is None
    assert outcome.probe is not None and "least_n" in outcome.probe


def test_verify_km_bad_rate(tent: PwlFunction) -> None:
    outcome = verify_km_theorem(
        tent,
        HarmonicSchedule(),
        F(1, 5),
        HALF,
        ConstantCounter(0),
        LinearModulus(HALF),
        ZeroRate(),
        Caps(horizon=1000),
    )
    assert outcome.status == Status.SKIPPED
    assert outcome.reason == "hypothesis: beta"
    assert outcome.trace["phi"] == "288"


def test_verify_km_search_cap(reflection: PwlFunction) -> None:
    outcome = verify_km_theorem(
        reflection,
        HarmonicSchedule(),
        F(0),
        HALF,
        ConstantCounter(1),
        OMEGA,
        HarmonicRate(),
        Caps(search=0),
    )
    # N = 0 is rejected and the search may not look further.
    assert outcome.status == Status.BOUND_ONLY
    assert outcome.least_n is None


def test_verify_ishikawa(identity: PwlFunction, tent: PwlFunction) -> None:
    outcome = verify_ishikawa_theorem(
        identity,
        HarmonicSchedule(),
        ConstantSchedule(F(0)),
        F(1, 3),
        HALF,
        ConstantCounter(0),
        OMEGA,
        ZeroRate(),
        ZeroRate(),
    )
    assert outcome.status == Status.SOUND
    assert outcome.bound == 288
    assert set(outcome.hypotheses) == {"omega", "beta", "gamma"}

    # No closed form for s = 1/2, and a zero rate fails on the run itself.
    outcome = verify_ishikawa_theorem(
        tent,
        HarmonicSchedule(),
        ConstantSchedule(HALF),
        F(1, 5),
        HALF,
        ConstantCounter(0),
        LinearModulus(HALF),
        HarmonicRate(),
        ZeroRate(),
        Caps(horizon=1000),
    )
    assert outcome.status == Status.SKIPPED
    assert outcome.reason == "hypothesis: gamma"


def test_verify_fmcp(reflection: PwlFunction) -> None:
    outcome = verify_fmcp(
        Scheme.KM, SHRINK, HarmonicSchedule(), None, F(0), HALF, ConstantCounter(1)
    )
    assert outcome.status == Status.SOUND
    assert outcome.bound == 2
    assert outcome.least_n == 0
    assert outcome.lemmas["monotone-bound"]
    assert outcome.trace == dict(steps="2", bound="2")

    outcome = verify_fmcp(
        Scheme.PICARD, reflection, None, None, F(0), HALF, ConstantCounter(1)
    )
    assert outcome.status == Status.SKIPPED
    assert outcome.reason == "hypothesis: monotone"

    outcome = verify_fmcp(
        "km", reflection, ConstantSchedule(HALF), None, F(0), HALF, ConstantCounter(1)
    )
    assert outcome.status == Status.SOUND


def test_verify_fmcp_flags_unchecked_lemma() -> None:
    caps = Caps(horizon=3, search=1)
    g = ConstantCounter(1)
    outcome = verify_fmcp(
        Scheme.KM, SHRINK, HarmonicSchedule(), None, F(0), HALF, g, caps
    )
    assert outcome.status == Status.SOUND
    assert outcome.least_n == 0
    assert "monotone-bound" not in outcome.lemmas
    assert outcome.flags == ("monotone-bound unchecked: needs 4 terms, horizon 3",)
    assert outcome.to_json()["flags"] == list(outcome.flags)


def test_verify_lipschitz(tent: PwlFunction) -> None:
    outcome = verify_lipschitz_theorem(
        tent, ConstantSchedule(F(1, 4)), F(1, 8), HALF, ConstantCounter(1), HALF
    )
    assert outcome.status == Status.SOUND
    assert outcome.bound == 54
    assert outcome.lemmas["single-step"]
    assert outcome.lemmas["switching"]
    assert outcome.least_n is not None and outcome.least_n <= 54


def test_verify_lipschitz_oscillating(reflection: PwlFunction) -> None:
    outcome = verify_lipschitz_theorem(
        reflection, ConstantSchedule(F(3, 4)), F(0), F(1, 4), ConstantCounter(2), HALF
    )
    assert outcome.status == Status.SOUND
    assert outcome.lemmas["switching"].checked > 0


def test_verify_lipschitz_checks_lemmas_past_search(reflection: PwlFunction) -> None:
    # The search stops at N = 0; the lemmas still see a run that switches.
    outcome = verify_lipschitz_theorem(
        reflection, ConstantSchedule(F(3, 4)), F(0), HALF, ConstantCounter(0), HALF
    )
    assert outcome.status == Status.SOUND
    assert outcome.least_n == 0
    switching = outcome.lemmas["switching"]
    assert switching and switching.reason is None
    assert switching.checked > 0
    assert outcome.lemmas["single-step"].checked >= LEMMA_HORIZON - 1


def test_picard_oscillator_is_skipped(reflection: PwlFunction) -> None:
    outcome = verify_lipschitz_theorem(
        reflection,
        None,
        F(0),
        HALF,
        ConstantCounter(1),
        HALF,
        Caps(search=50),
        scheme=Scheme.PICARD,
    )
    assert outcome.status == Status.SKIPPED
    assert outcome.reason == "hypothesis: parameters"
    assert outcome.probe == dict(least_n=None, searched=51)
