"""
Brute-force verification of the metastability bounds.

The search for the least metastable point works from the definition only:
for each ``N`` it inspects the window ``[N, N + g(N)]`` of the exact run and
never consults the bound recursions. The ``verify_*`` functions certify the
hypotheses of each convergence statement first, then compute the bound and
compare.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from metastability.bounds import (
    KmBoundTrace,
    fmcp_bound,
    phi_i,
    phi_km,
    psi_km,
    psi_violations,
    trace_violations,
)
from metastability.functions import PwlFunction, check_modulus
from metastability.iterations import (
    IterationRun,
    Scheme,
    switching_sequence,
)
from metastability.numerics import (
    DEFAULT_CAPS,
    CapExceededError,
    Caps,
    ceil_rational,
    format_nat,
    format_rational,
)
from metastability.schedules import (
    CounterFunc,
    Modulus,
    ParamSchedule,
    Rate,
    check_rate,
    rate_dominates,
    rate_for_schedule,
    wt,
    wt_iter,
)
from metastability.verdict import Verdict

logger = logging.getLogger(__name__)

OMEGA_PROBES: Tuple[Fraction, ...] = tuple(Fraction(1, 2**k) for k in range(11))
PROBE_LIMIT = 1000
LEMMA_HORIZON = 64


class InsufficientLengthError(ValueError):
    """A window reaches past the end of the supplied sequence."""


class Status(str, enum.Enum):
    """Outcome of verifying one scenario."""

    SOUND = "sound"
    SKIPPED = "skipped"
    BOUND_ONLY = "bound-only"
    FAILED = "failed"


@dataclass(frozen=True)
class Witness(object):
    """A pair ``i, j`` in the window of `N` with ``|x_i - x_j| > ε``."""

    N: int
    i: int
    j: int
    gap: Fraction


@dataclass(frozen=True)
class MetaSearch(object):
    """
    Result of the least-metastable search.

    :ivar least_n: the least metastable point, `None` if none was found up to
        the search cap.
    :ivar searched: number of candidates examined.
    :ivar witnesses: one :py:class:`Witness` per rejected candidate, in order.
    """

    least_n: Optional[int]
    searched: int
    witnesses: Tuple[Witness, ...] = ()


def _window_end(g: CounterFunc, N: int, length: int) -> int:
    end = N + g(N)
    if end >= length:
        raise InsufficientLengthError(
            "window [%d, %d] needs %d terms, got %d" % (N, end, end + 1, length)
        )
    return end


def least_metastable(
    xs: Sequence[Fraction],
    epsilon: Fraction,
    g: CounterFunc,
    search_cap: int,
    record_witnesses: bool = True,
) -> MetaSearch:
    """
    Least ``N <= search_cap`` with ``|x_i - x_j| <= ε`` for all ``i, j`` in
    ``[N, N + g(N)]``.

    Each window is checked through its extrema, which is equivalent to the
    pairwise condition.

    :param xs: the sequence; may be a lazy
        :py:class:`~metastability.iterations.RunView`.
    :raise InsufficientLengthError: if a window examined before the answer
        reaches past ``len(xs)``.
    """
    witnesses: List[Witness] = []
    for N in range(search_cap + 1):
        end = _window_end(g, N, len(xs))
        lo = hi = N
        for i in range(N + 1, end + 1):
            if xs[i] < xs[lo]:
                lo = i
            elif xs[i] > xs[hi]:
                hi = i
        gap = xs[hi] - xs[lo]
        if gap <= epsilon:
            return MetaSearch(N, N + 1, tuple(witnesses))
        if record_witnesses:
            witnesses.append(Witness(N, min(lo, hi), max(lo, hi), gap))
    return MetaSearch(None, search_cap + 1, tuple(witnesses))


def least_metastable_naive(
    xs: Sequence[Fraction], epsilon: Fraction, g: CounterFunc, search_cap: int
) -> Optional[int]:
    """Same search as :py:func:`least_metastable`, comparing every pair."""
    for N in range(search_cap + 1):
        end = _window_end(g, N, len(xs))
        window = range(N, end + 1)
        if all(abs(xs[i] - xs[j]) <= epsilon for i in window for j in window):
            return N
    return None


def needed_horizon(bound: int, g: CounterFunc, caps: Caps = DEFAULT_CAPS) -> int:
    """
    ``max_{N <= bound} (N + g(N)) + 1``, the number of terms the search up to
    `bound` may read.
    """
    if g.nondecreasing:
        return caps.check_nat(wt(g, bound) + 1, "needed horizon")
    caps.check_iterations(bound, "horizon scan")
    return caps.check_nat(max(wt(g, N) for N in range(bound + 1)) + 1, "needed horizon")


@dataclass(frozen=True)
class MetaVerdict(object):
    """
    Comparison of the least metastable point with a bound.

    :ivar least_n: `None` when no metastable point exists up to `bound`.
    """

    least_n: Optional[int]
    bound: int
    witnesses: Tuple[Witness, ...] = ()

    @property
    def sound(self) -> bool:
        return self.least_n is not None and self.least_n <= self.bound

    def to_json(self) -> Dict[str, Any]:
        return dict(
            least_n=None if self.least_n is None else format_nat(self.least_n),
            bound=format_nat(self.bound),
            sound=self.sound,
            rejected=len(self.witnesses),
        )


def verify_monotone_bound(
    xs: Sequence[Fraction], epsilon: Fraction, g: CounterFunc, caps: Caps = DEFAULT_CAPS
) -> Verdict:
    """
    Finite monotone convergence: a monotone sequence in [0, 1] with at least
    ``g̃^(K+1)(0) + 1`` terms, ``K = ⌈1/ε⌉``, has an ``N <= g̃^(K)(0)``
    whose window fits in the sequence and has diameter at most ε.
    """
    k = ceil_rational(1 / epsilon)
    bound = wt_iter(g, k, caps)
    length = wt_iter(g, k + 1, caps) + 1
    if len(xs) < length:
        raise InsufficientLengthError("need %d terms, got %d" % (length, len(xs)))
    steps = [xs[n + 1] - xs[n] for n in range(length - 1)]
    if not (all(d >= 0 for d in steps) or all(d <= 0 for d in steps)):
        return Verdict.fail("not monotone", checked=len(steps))
    checked = 0
    for N in range(bound + 1):
        end = N + g(N)
        if end >= length:
            continue
        checked += 1
        window = [xs[i] for i in range(N, end + 1)]
        if max(window) - min(window) <= epsilon:
            return Verdict.ok("N = %d" % N, checked)
    return Verdict.fail("no N <= %d" % bound, bound, checked)


def check_lemma_dl1(
    f: PwlFunction,
    x: Fraction,
    t: Fraction,
    delta: Fraction,
    p: Optional[Fraction] = None,
) -> Verdict:
    """
    One step ``x* = (1 - t)x + t f(x)`` of a Lipschitz map with
    ``t <= (2 - δ)/(L + 1)`` contracts towards every fixed point `p` between
    `x` and ``x*``: ``|x* - p| <= (1 - δ)|x - p|``.

    :param p: check this fixed point instead of all those between `x` and
        ``x*``.
    :raise ValueError: if `t` is above ``(2 - δ)/(L + 1)`` or `p` is not a
        fixed point.
    """
    limit = (2 - delta) / (f.lipschitz_constant() + 1)
    if t > limit:
        raise ValueError(
            "t = %s exceeds (2 - delta)/(L + 1) = %s"
            % (format_rational(t), format_rational(limit))
        )
    x_star = (1 - t) * x + t * f(x)
    if p is not None:
        if f(p) != p:
            raise ValueError("%s is not a fixed point" % format_rational(p))
        candidates = [p]
    else:
        # The inequality is affine in p on each interval, so its ends suffice.
        intervals = f.fixed_point_set_in(min(x, x_star), max(x, x_star))
        candidates = [end for interval in intervals for end in interval]
    for i, q in enumerate(candidates):
        if abs(x_star - q) > (1 - delta) * abs(x - q):
            return Verdict.fail(
                "|x* - p| > (1 - delta)|x - p| at p = %s" % format_rational(q), q, i + 1
            )
    return Verdict.ok(checked=len(candidates))


def _between(v: Fraction, a: Fraction, b: Fraction) -> bool:
    return min(a, b) <= v <= max(a, b)


def check_lemma_dl3(
    run: IterationRun, delta: Fraction, length: Optional[int] = None
) -> Verdict:
    """
    For every pair of consecutive finite switching indices ``q_r, q_{r+1}``
    (``r >= 1``) inside `length`, with ``n_1 = q_r - 1``, ``n_2 = q_{r+1} - 1``
    and both ``t_{n_1}, t_{n_2} <= (2 - δ)/(L + 1)``:

    - every ``x_n``, ``n ∈ [n_1 + 1, n_2 + 1]``, lies between ``x_{n_1}`` and
      ``x_{n_1 + 1}``;
    - ``|x_{n_2} - x_{n_2 + 1}| <= (1 - δ/2)|x_{n_1} - x_{n_1 + 1}|``.

    When every ``t_n`` satisfies the bound, also checks the chained form
    ``|x_{q_r - 1} - x_{q_r}| <= (1 - δ/2)^(r - 1)``.

    :param length: number of sign values to inspect, default the current
        length of `run`.
    """
    if run.scheme == Scheme.ISHIKAWA:
        raise ValueError("switching lemmas apply to krasnoselski-mann runs")
    length = len(run) if length is None else length
    trace = switching_sequence(run, length)
    xs = run.xs
    limit = (2 - delta) / (run.f.lipschitz_constant() + 1)
    contraction = 1 - delta / 2
    checked = 0
    pairs = trace.finite_pairs()
    for r, q_r, q_next in pairs:
        n1, n2 = q_r - 1, q_next - 1
        if run.t(n1) > limit or run.t(n2) > limit:
            continue
        a, b = xs[n1], xs[n1 + 1]
        for n in range(n1 + 1, n2 + 2):
            checked += 1
            if not _between(xs[n], a, b):
                return Verdict.fail(
                    "x_%d not between x_%d and x_%d" % (n, n1, n1 + 1), (r, n), checked
                )
        checked += 1
        if abs(xs[n2] - xs[n2 + 1]) > contraction * abs(a - b):
            return Verdict.fail("no contraction at r = %d" % r, (r, n2), checked)

    if run.t.supremum() <= limit:
        for r in range(1, len(trace.q)):
            q_r = trace.q[r]
            checked += 1
            if abs(xs[q_r - 1] - xs[q_r]) > contraction ** (r - 1):
                reason = "chained contraction fails at r = %d" % r
                return Verdict.fail(reason, r, checked)

    if not pairs:
        return Verdict.ok("no finite switching pair", checked)
    return Verdict.ok(checked=checked)


@dataclass
class Outcome(object):
    """
    Verification result of one scenario.

    :ivar status: see :py:class:`Status`.
    :ivar bound: the computed bound, `None` if it could not be computed.
    :ivar trace: summary of the bound trace.
    :ivar meta: the least-metastable comparison, when the search ran.
    :ivar hypotheses: certification verdicts by name.
    :ivar lemmas: auxiliary property checks by name.
    :ivar probe: informational search result for skipped scenarios.
    :ivar flags: notes such as ``"epsilon>=1"``.
    """

    status: Status
    bound: Optional[int] = None
    trace: Dict[str, Any] = field(default_factory=dict)
    meta: Optional[MetaVerdict] = None
    reason: Optional[str] = None
    hypotheses: Dict[str, Verdict] = field(default_factory=dict)
    lemmas: Dict[str, Verdict] = field(default_factory=dict)
    probe: Optional[Dict[str, Any]] = None
    flags: Tuple[str, ...] = ()

    @property
    def least_n(self) -> Optional[int]:
        return None if self.meta is None else self.meta.least_n

    def to_json(self) -> Dict[str, Any]:
        result: Dict[str, Any] = dict(
            status=self.status.value,
            bound=None if self.bound is None else format_nat(self.bound),
            trace=self.trace,
            hypotheses={k: v.to_json() for k, v in self.hypotheses.items()},
        )
        if self.meta is not None:
            result["meta"] = self.meta.to_json()
        if self.reason is not None:
            result["reason"] = self.reason
        if self.lemmas:
            result["lemmas"] = {k: v.to_json() for k, v in self.lemmas.items()}
        if self.probe is not None:
            result["probe"] = self.probe
        if self.flags:
            result["flags"] = list(self.flags)
        return result


def _probe(
    run: IterationRun, epsilon: Fraction, g: CounterFunc, caps: Caps
) -> Dict[str, Any]:
    limit = min(caps.search, PROBE_LIMIT)
    try:
        found = least_metastable(
            run.view(needed_horizon(limit, g, caps)),
            epsilon,
            g,
            limit,
            record_witnesses=False,
        )
    except CapExceededError as e:
        return dict(error=str(e))
    return dict(
        least_n=None if found.least_n is None else format_nat(found.least_n),
        searched=found.searched,
    )


def _skip(
    outcome: Outcome, run: IterationRun, epsilon: Fraction, g: CounterFunc, caps: Caps
) -> Outcome:
    failing = [name for name, v in outcome.hypotheses.items() if not v]
    outcome.status = Status.SKIPPED
    outcome.reason = "hypothesis: %s" % ", ".join(failing)
    outcome.probe = _probe(run, epsilon, g, caps)
    logger.warning("Skipped: %s" % outcome.reason)
    return outcome


def _search(
    outcome: Outcome,
    run: IterationRun,
    bound: int,
    epsilon: Fraction,
    g: CounterFunc,
    caps: Caps,
) -> Outcome:
    """Search up to ``min(bound, caps.search)`` and classify the result."""
    outcome.bound = bound
    limit = min(bound, caps.search)
    try:
        found = least_metastable(
            run.view(needed_horizon(limit, g, caps)), epsilon, g, limit
        )
    except CapExceededError as e:
        outcome.status = Status.BOUND_ONLY
        outcome.reason = str(e)
        return outcome
    outcome.meta = MetaVerdict(found.least_n, bound, found.witnesses)
    if found.least_n is not None:
        outcome.status = Status.SOUND
    elif limit < bound:
        outcome.status = Status.BOUND_ONLY
        outcome.reason = "search cap %d below bound" % limit
    else:
        outcome.status = Status.FAILED
        outcome.reason = "no metastable N <= %d" % bound
    logger.debug(
        "Search up to %d: least N = %s, status %s"
        % (limit, found.least_n, outcome.status.value)
    )
    return outcome


def _fail(outcome: Outcome, reason: str) -> Outcome:
    outcome.status = Status.FAILED
    outcome.reason = reason
    return outcome


def _certify_rate(
    declared: Rate,
    schedule: Optional[ParamSchedule],
    seq: Callable[[int], Sequence[Fraction]],
    deltas: Sequence[Fraction],
    horizon: int,
) -> Verdict:
    """
    Certify `declared` at `deltas`, structurally when it dominates the closed
    form rate of `schedule`, else on the first `horizon` terms of ``seq``.
    """
    reference = None if schedule is None else rate_for_schedule(schedule)
    if reference is not None:
        verdict = rate_dominates(declared, reference, deltas)
        if verdict:
            return verdict
    for delta in deltas:
        if declared(delta) >= horizon:
            return Verdict.fail(
                "rate at %s lies beyond certification horizon %d"
                % (format_rational(delta), horizon),
                delta,
            )
    return check_rate(seq(horizon), declared, deltas, horizon)


def _certification_horizon(bound: int, g: CounterFunc, caps: Caps) -> int:
    return min(needed_horizon(bound, g, caps), caps.horizon - 1)


def verify_km_theorem(
    f: PwlFunction,
    t: Optional[ParamSchedule],
    x0: Fraction,
    epsilon: Fraction,
    g: CounterFunc,
    omega: Modulus,
    beta: Rate,
    caps: Caps = DEFAULT_CAPS,
    scheme: Union[Scheme, str] = Scheme.KM,
) -> Outcome:
    """
    Check that some ``N <= phi_km(ε, g, ω, β)`` is metastable for the run of
    `f` from `x0`.

    ω is certified on a probe grid and at every argument the recursion
    queried; β is certified as a rate for ``x_n - x_{n+1}`` at every
    argument the recursion queried.
    """
    run = IterationRun(scheme, f, t, None, x0, caps)
    outcome = Outcome(Status.SKIPPED)
    outcome.hypotheses["omega"] = check_modulus(f, omega, OMEGA_PROBES)
    if not outcome.hypotheses["omega"]:
        return _skip(outcome, run, epsilon, g, caps)
    try:
        trace = phi_km(epsilon, g, omega, beta, caps)
        outcome.trace = trace.summary()
        outcome.hypotheses["omega"] = check_modulus(
            f, omega, OMEGA_PROBES + trace.omega_args
        )
        horizon = _certification_horizon(trace.phi, g, caps)
        outcome.hypotheses["beta"] = _certify_rate(
            beta, run.t, run.differences, trace.beta_args, horizon
        )
    except CapExceededError as e:
        return _bound_only(outcome, e)
    if not all(outcome.hypotheses.values()):
        return _skip(outcome, run, epsilon, g, caps)

    _search(outcome, run, trace.phi, epsilon, g, caps)
    violations = trace_violations(trace, g, beta, omega)
    if violations:
        return _fail(outcome, "trace: %s" % "; ".join(violations))
    n = run.betweenness_violation()
    if n is not None:
        return _fail(outcome, "x_%d leaves the betweenness hypothesis" % (n + 1))
    return outcome


def certify_ishikawa(
    outcome: Outcome,
    run: IterationRun,
    epsilon: Fraction,
    g: CounterFunc,
    omega: Modulus,
    beta: Rate,
    gamma: Rate,
    caps: Caps = DEFAULT_CAPS,
) -> Optional[KmBoundTrace]:
    """
    Fill ``outcome.hypotheses`` for the Ishikawa statement on `run` and
    return the bound trace, or `None` if ω already fails on the probe grid.

    :raise CapExceededError: if the bound or a certification horizon passes
        `caps`.
    """
    outcome.hypotheses["omega"] = check_modulus(run.f, omega, OMEGA_PROBES)
    if not outcome.hypotheses["omega"]:
        return None
    trace = phi_i(epsilon, g, omega, beta, gamma, caps)
    outcome.trace = trace.summary()
    outcome.hypotheses["omega"] = check_modulus(
        run.f, omega, OMEGA_PROBES + trace.omega_args
    )
    horizon = _certification_horizon(trace.phi, g, caps)
    outcome.hypotheses["beta"] = _certify_rate(
        beta, run.t, run.differences, trace.beta_args, horizon
    )
    outcome.hypotheses["gamma"] = _certify_rate(
        gamma, run.s, run.inner_gaps, trace.gamma_args, horizon
    )
    return trace


def verify_ishikawa_theorem(
    f: PwlFunction,
    t: ParamSchedule,
    s: ParamSchedule,
    x0: Fraction,
    epsilon: Fraction,
    g: CounterFunc,
    omega: Modulus,
    beta: Rate,
    gamma: Rate,
    caps: Caps = DEFAULT_CAPS,
) -> Outcome:
    """
    Check that some ``N <= phi_i(ε, g, ω, β, γ)`` is metastable for the
    Ishikawa run of `f` from `x0`, with γ certified as a rate for
    ``x_n - y_n``.
    """
    run = IterationRun(Scheme.ISHIKAWA, f, t, s, x0, caps)
    outcome = Outcome(Status.SKIPPED)
    try:
        trace = certify_ishikawa(outcome, run, epsilon, g, omega, beta, gamma, caps)
    except CapExceededError as e:
        return _bound_only(outcome, e)
    if trace is None or not all(outcome.hypotheses.values()):
        return _skip(outcome, run, epsilon, g, caps)

    _search(outcome, run, trace.phi, epsilon, g, caps)
    violations = trace_violations(trace, g, beta, omega, gamma)
    if violations:
        return _fail(outcome, "trace: %s" % "; ".join(violations))
    n = run.betweenness_violation()
    if n is not None:
        return _fail(outcome, "step %d leaves the betweenness hypothesis" % n)
    return outcome


def monotone_hypothesis(
    scheme: Union[Scheme, str], f: PwlFunction, t: ParamSchedule
) -> Verdict:
    """
    Whether every run of the scheme is monotone: `f` nondecreasing, or a
    Krasnoselski-Mann run with ``sup t_n <= 1/(L + 1)``.
    """
    if f.is_monotone:
        return Verdict.ok("f is nondecreasing")
    scheme = Scheme(scheme)
    if scheme == Scheme.KM and t.supremum() <= 1 / (f.lipschitz_constant() + 1):
        return Verdict.ok("sup t <= 1/(L + 1)")
    return Verdict.fail("run not known to be monotone")


def verify_fmcp(
    scheme: Union[Scheme, str],
    f: PwlFunction,
    t: Optional[ParamSchedule],
    s: Optional[ParamSchedule],
    x0: Fraction,
    epsilon: Fraction,
    g: CounterFunc,
    caps: Caps = DEFAULT_CAPS,
) -> Outcome:
    """
    Check that some ``N <= g̃^(⌈1/ε⌉)(0)`` is metastable for a run that is
    monotone by :py:func:`monotone_hypothesis`.
    """
    run = IterationRun(scheme, f, t, s, x0, caps)
    outcome = Outcome(Status.SKIPPED)
    outcome.hypotheses["monotone"] = monotone_hypothesis(run.scheme, f, run.t)
    if not outcome.hypotheses["monotone"]:
        return _skip(outcome, run, epsilon, g, caps)
    try:
        bound = fmcp_bound(epsilon, g, caps)
    except CapExceededError as e:
        return _bound_only(outcome, e)
    steps = ceil_rational(1 / epsilon)
    outcome.trace = dict(steps=format_nat(steps), bound=format_nat(bound))

    _search(outcome, run, bound, epsilon, g, caps)
    if not run.is_monotone():
        return _fail(outcome, "generated prefix is not monotone")
    unchecked: Optional[str] = None
    try:
        length = wt_iter(g, steps + 1, caps) + 1
        if length <= caps.horizon:
            outcome.lemmas["monotone-bound"] = verify_monotone_bound(
                run.view(length), epsilon, g, caps
            )
        else:
            unchecked = "needs %d terms, horizon %d" % (length, caps.horizon)
    except CapExceededError as e:
        unchecked = str(e)
    if unchecked is not None:
        outcome.flags += ("monotone-bound unchecked: %s" % unchecked,)
        logger.debug("Monotone bound not checked: %s" % unchecked)
    if not all(outcome.lemmas.values()):
        return _fail(outcome, "finite monotone convergence fails")
    return outcome


def verify_lipschitz_theorem(
    f: PwlFunction,
    t: Optional[ParamSchedule],
    x0: Fraction,
    epsilon: Fraction,
    g: CounterFunc,
    delta: Fraction,
    caps: Caps = DEFAULT_CAPS,
    scheme: Union[Scheme, str] = Scheme.KM,
) -> Outcome:
    """
    Check that some ``N <= psi_km(ε, g, δ)`` is metastable for the run of an
    L-Lipschitz `f`, after certifying ``t_n <= (2 - δ)/(L + 1)`` for all `n`.

    The single-step and switching lemmas are checked on every point of the
    run, extended to at least :py:data:`LEMMA_HORIZON` points.
    """
    run = IterationRun(scheme, f, t, None, x0, caps)
    outcome = Outcome(Status.SKIPPED)
    limit = (2 - delta) / (f.lipschitz_constant() + 1)
    if run.t.supremum() <= limit:
        outcome.hypotheses["parameters"] = Verdict.ok("sup t <= (2 - delta)/(L + 1)")
    else:
        outcome.hypotheses["parameters"] = Verdict.fail(
            "sup t = %s > (2 - delta)/(L + 1) = %s"
            % (format_rational(run.t.supremum()), format_rational(limit))
        )
        return _skip(outcome, run, epsilon, g, caps)
    try:
        trace = psi_km(epsilon, g, delta, caps)
    except CapExceededError as e:
        return _bound_only(outcome, e)
    outcome.trace = trace.summary()
    outcome.flags = trace.flags

    _search(outcome, run, trace.psi, epsilon, g, caps)
    violations = psi_violations(trace, epsilon, delta)
    if violations:
        return _fail(outcome, "trace: %s" % "; ".join(violations))

    run.extend(min(max(len(run), LEMMA_HORIZON), caps.horizon))
    outcome.lemmas["single-step"] = _check_dl1_along(run, delta)
    outcome.lemmas["switching"] = check_lemma_dl3(run, delta)
    if not all(outcome.lemmas.values()):
        failing = [name for name, v in outcome.lemmas.items() if not v]
        return _fail(outcome, "lemma: %s" % ", ".join(failing))
    return outcome


def _check_dl1_along(run: IterationRun, delta: Fraction) -> Verdict:
    checked = 0
    for n in range(len(run) - 1):
        verdict = check_lemma_dl1(run.f, run.xs[n], run.t(n), delta)
        checked += verdict.checked
        if not verdict:
            return Verdict.fail("step %d: %s" % (n, verdict.reason), n, checked)
    return Verdict.ok(checked=checked)


def _bound_only(outcome: Outcome, error: CapExceededError) -> Outcome:
    outcome.status = Status.BOUND_ONLY
    outcome.reason = str(error)
    logger.warning("Bound only: %s" % error)
    return outcome
