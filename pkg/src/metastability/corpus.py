"""
Seeded random scenario corpora.

Every scenario is built so that the hypotheses of its theorem hold: the
modulus comes from the Lipschitz constant, rates come from the closed form of
the parameter schedule, and δ is chosen from `L` so that
``t <= (2 - δ)/(L + 1)``. The one exception is the inner rate γ of an
Ishikawa scenario with ``s = constant(q)``, ``q > 0``, which has no closed
form; it is measured on a run of :py:data:`GEN_HORIZON` points, the
scenario is capped at that horizon, and the measured table is certified the
way verification certifies it. Maps whose table does not certify are
redrawn; after :py:data:`ISHIKAWA_ATTEMPTS` draws the scenario falls back to
``s = constant(0)``.
"""
from __future__ import annotations

import logging
import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from metastability.bounds import phi_i
from metastability.functions import PwlFunction, modulus_from_lipschitz
from metastability.iterations import IterationRun, Scheme
from metastability.numerics import DEFAULT_CAPS, CapExceededError, Caps
from metastability.oracle import Outcome, Status, certify_ishikawa
from metastability.protocol import Scenario, Theorem
from metastability.schedules import (
    AffineCounter,
    ConstantCounter,
    ConstantRate,
    ConstantSchedule,
    CounterFunc,
    Exp2Counter,
    HarmonicRate,
    HarmonicSchedule,
    Modulus,
    Rate,
    TableRate,
    ZeroRate,
    capped_identity,
)

logger = logging.getLogger(__name__)

MAX_DENOMINATOR = 64
MAX_LIPSCHITZ = 8
GEN_HORIZON = 400
ISHIKAWA_ATTEMPTS = 8

PROFILES = ("easy", "standard", "hard")
ISHIKAWA_INNER = (Fraction(0), Fraction(1, 4), Fraction(1, 2))


def _fraction(
    rng: random.Random, low: Fraction = Fraction(0), high: Fraction = Fraction(1)
) -> Fraction:
    """A random rational in ``[low, high]`` with denominator at most 64."""
    den = rng.randint(1, MAX_DENOMINATOR)
    lo = -((-low.numerator * den) // low.denominator)
    hi = (high.numerator * den) // high.denominator
    if lo > hi:
        return low
    return Fraction(rng.randint(lo, hi), den)


def random_pwl(
    rng: random.Random, monotone: bool = False, max_lipschitz: int = MAX_LIPSCHITZ
) -> PwlFunction:
    """
    A random piecewise-linear self-map with 2 to 8 breakpoints and Lipschitz
    constant at most `max_lipschitz`.
    """
    while True:
        count = rng.randint(2, 8)
        picks = {_fraction(rng) for _ in range(count - 2)}
        inner = sorted(picks - {Fraction(0), Fraction(1)})
        xs = [Fraction(0)] + inner + [Fraction(1)]
        ys = [_fraction(rng) for _ in xs]
        if monotone:
            ys.sort()
        f = PwlFunction(zip(xs, ys))
        if f.lipschitz_constant() <= max_lipschitz:
            return f


def _counter(rng: random.Random, profile: str) -> CounterFunc:
    if profile == "easy":
        return ConstantCounter(rng.randint(0, 1))
    choice = rng.randint(0, 3 if profile == "standard" else 5)
    if choice <= 1:
        return ConstantCounter(rng.randint(0, 3))
    if choice <= 3:
        return capped_identity(rng.randint(1, 3))
    if choice == 4:
        return AffineCounter(rng.randint(1, 2), rng.randint(0, 2))
    return Exp2Counter()


def _epsilon(rng: random.Random, profile: str) -> Fraction:
    choices = {
        "easy": (Fraction(1, 2),),
        "standard": (Fraction(1, 2), Fraction(1, 3)),
        "hard": (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)),
    }[profile]
    return rng.choice(choices)


def _km(rng: random.Random, name: str, profile: str) -> Scenario:
    f = random_pwl(rng)
    return Scenario(
        id=name,
        theorem=Theorem.KM,
        scheme=Scheme.KM,
        f=f,
        t=HarmonicSchedule(),
        x0=_fraction(rng),
        epsilon=_epsilon(rng, profile),
        g=_counter(rng, profile),
        omega=modulus_from_lipschitz(f.lipschitz_constant()),
        beta=HarmonicRate(),
    )


def measure_inner_rate(
    run: IterationRun, deltas: List[Fraction], horizon: int
) -> TableRate:
    """
    Step rate whose value at each δ is the least ``n_0`` with
    ``|x_n - y_n| <= δ`` for every ``n`` in ``[n_0, horizon)``. Below the
    smallest δ it answers `horizon`.
    """
    gaps = [abs(v) for v in run.inner_gaps(horizon)]
    steps = []
    for delta in deltas:
        n0 = horizon
        while n0 > 0 and gaps[n0 - 1] <= delta:
            n0 -= 1
        steps.append((delta, n0))
    return TableRate(tuple(steps), ConstantRate(horizon))


def _inner_rate_certified(
    run: IterationRun,
    epsilon: Fraction,
    g: CounterFunc,
    omega: Modulus,
    gamma: Rate,
    caps: Caps,
) -> bool:
    outcome = Outcome(Status.SKIPPED)
    try:
        certify_ishikawa(outcome, run, epsilon, g, omega, HarmonicRate(), gamma, caps)
    except CapExceededError:
        # Verification stops at the same cap and reports bound-only.
        return True
    return all(outcome.hypotheses.values())


def _ishikawa_draw(
    rng: random.Random, name: str, q: Fraction, epsilon: Fraction, g: CounterFunc
) -> Optional[Scenario]:
    f = random_pwl(rng)
    x0 = _fraction(rng)
    s = ConstantSchedule(q)
    t = HarmonicSchedule()
    omega = modulus_from_lipschitz(f.lipschitz_constant())
    caps: Dict[str, int] = {}
    gamma: Rate = ZeroRate()
    if q > 0:
        args: Tuple[Fraction, ...] = ()
        try:
            # The queried arguments depend on gamma only through g(u_n), which
            # is fixed past u_0 for constant and capped counters.
            args = phi_i(epsilon, g, omega, HarmonicRate(), ZeroRate()).gamma_args
        except CapExceededError:
            # Verification stops at the same cap and reports bound-only.
            pass
        if args:
            run_caps = DEFAULT_CAPS.override(horizon=GEN_HORIZON)
            run = IterationRun(Scheme.ISHIKAWA, f, t, s, x0, run_caps)
            gamma = measure_inner_rate(run, list(args), GEN_HORIZON - 1)
            caps["horizon"] = GEN_HORIZON
            if not _inner_rate_certified(run, epsilon, g, omega, gamma, run_caps):
                return None
    return Scenario(
        id=name,
        theorem=Theorem.ISHIKAWA,
        scheme=Scheme.ISHIKAWA,
        f=f,
        t=t,
        s=s,
        x0=x0,
        epsilon=epsilon,
        g=g,
        omega=omega,
        beta=HarmonicRate(),
        gamma=gamma,
        caps=caps,
    )


def _ishikawa(rng: random.Random, name: str, profile: str) -> Scenario:
    q = rng.choice(ISHIKAWA_INNER)
    epsilon = _epsilon(rng, profile)
    g = _counter(rng, profile)
    for _ in range(ISHIKAWA_ATTEMPTS):
        scenario = _ishikawa_draw(rng, name, q, epsilon, g)
        if scenario is not None:
            return scenario
    logger.debug("%s: no certified inner rate, falling back to s = 0" % name)
    scenario = _ishikawa_draw(rng, name, Fraction(0), epsilon, g)
    assert scenario is not None
    return scenario


def _lipschitz(rng: random.Random, name: str, profile: str) -> Scenario:
    f = random_pwl(rng)
    L = f.lipschitz_constant()
    delta = rng.choice((Fraction(1, 2), Fraction(1, 4)))
    limit = min(Fraction(1), (2 - delta) / (L + 1))
    t = _fraction(rng, Fraction(1, MAX_DENOMINATOR), limit)
    return Scenario(
        id=name,
        theorem=Theorem.LIPSCHITZ,
        scheme=Scheme.KM,
        f=f,
        t=ConstantSchedule(min(t, limit)),
        x0=_fraction(rng),
        epsilon=_epsilon(rng, profile),
        g=_counter(rng, profile),
        delta=delta,
    )


def _fmcp(rng: random.Random, name: str, profile: str) -> Scenario:
    f = random_pwl(rng, monotone=True)
    t = HarmonicSchedule() if rng.random() < 0.5 else ConstantSchedule(_fraction(rng))
    return Scenario(
        id=name,
        theorem=Theorem.FMCP,
        scheme=Scheme.KM,
        f=f,
        t=t,
        x0=_fraction(rng),
        epsilon=_epsilon(rng, profile),
        g=_counter(rng, profile),
    )


GENERATORS: Dict[Theorem, Callable[[random.Random, str, str], Scenario]] = {
    Theorem.FMCP: _fmcp,
    Theorem.KM: _km,
    Theorem.ISHIKAWA: _ishikawa,
    Theorem.LIPSCHITZ: _lipschitz,
}


def generate_corpus(
    seed: int,
    count: int,
    theorem: Optional[Theorem] = None,
    profile: str = "standard",
) -> List[Scenario]:
    """
    Deterministic corpus of `count` scenarios.

    :param theorem: restrict to one theorem; by default theorems rotate.
    :param profile: ``easy`` (ε = 1/2, ``g`` constant 0 or 1), ``standard``
        (ε in {1/2, 1/3}, constant or capped identity ``g``) or ``hard``
        (adds ε = 1/4 and affine and exponential ``g``).
    """
    if profile not in PROFILES:
        raise ValueError("unknown profile %r" % profile)
    rng = random.Random(seed)
    order: Tuple[Theorem, ...] = (Theorem(theorem),) if theorem else tuple(Theorem)
    scenarios = []
    for i in range(count):
        kind = order[i % len(order)]
        name = "%s-%d-%04d" % (kind.value, seed, i)
        scenarios.append(GENERATORS[kind](rng, name, profile))
    logger.debug("Generated %d scenarios from seed %d" % (count, seed))
    return scenarios
