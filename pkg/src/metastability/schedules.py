"""
Symbolic counter functions, moduli, rates and parameter schedules.

Every family is a small frozen value with an exact ``__call__`` and a JSON
form ``{"kind": ..., <parameters>}``; rationals travel as ``"num/den"``
strings. Opaque callables are deliberately absent so that a scenario can be
written to disk and replayed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from metastability.numerics import (
    DEFAULT_CAPS,
    CapExceededError,
    Caps,
    ceil_rational,
    format_rational,
    log_ceil_base_lt1,
    nat,
    pos_rational,
    to_rational,
    unit_rational,
)
from metastability.verdict import Verdict

logger = logging.getLogger(__name__)

EXP2_ARGUMENT_LIMIT = 1 << 16


def _kind_of(obj: Any, family: str) -> str:
    if not isinstance(obj, dict):
        raise ValueError("%s must be an object, got %r" % (family, obj))
    kind = obj.get("kind")
    if not isinstance(kind, str):
        raise ValueError("%s is missing a string 'kind'" % family)
    return kind


def _field(obj: Dict[str, Any], name: str, family: str) -> Any:
    if name not in obj:
        raise ValueError(
            "%s of kind %r requires field %r" % (family, obj["kind"], name)
        )
    return obj[name]


# Counter functions g: N -> N.


class CounterFunc(object):
    """Base class of the counter function families."""

    kind = ""

    def __call__(self, n: int) -> int:
        raise NotImplementedError()

    @property
    def nondecreasing(self) -> bool:
        """Whether ``g`` (hence ``n + g(n)``) is known to be nondecreasing."""
        return False

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError()


@dataclass(frozen=True)
class ConstantCounter(CounterFunc):
    c: int
    kind = "constant"

    def __post_init__(self) -> None:
        nat(self.c)

    def __call__(self, n: int) -> int:
        return self.c

    @property
    def nondecreasing(self) -> bool:
        return True

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind, c=self.c)


@dataclass(frozen=True)
class IdentityCounter(CounterFunc):
    kind = "identity"

    def __call__(self, n: int) -> int:
        return n

    @property
    def nondecreasing(self) -> bool:
        return True

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind)


@dataclass(frozen=True)
class AffineCounter(CounterFunc):
    """``n ↦ a·n + b``."""

    a: int
    b: int
    kind = "affine"

    def __post_init__(self) -> None:
        nat(self.a)
        nat(self.b)

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    @property
    def nondecreasing(self) -> bool:
        return True

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind, a=self.a, b=self.b)


@dataclass(frozen=True)
class TableCounter(CounterFunc):
    """Explicit values for ``n < len(values)``, `default` afterwards."""

    values: Tuple[int, ...]
    default: CounterFunc
    kind = "table"

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(nat(v) for v in self.values))

    def __call__(self, n: int) -> int:
        if n < len(self.values):
            return self.values[n]
        return self.default(n)

    def to_json(self) -> Dict[str, Any]:
        return dict(
            kind=self.kind, values=list(self.values), default=self.default.to_json()
        )


@dataclass(frozen=True)
class ComposeCounter(CounterFunc):
    """``n ↦ outer(inner(n))``."""

    outer: CounterFunc
    inner: CounterFunc
    kind = "compose"

    def __call__(self, n: int) -> int:
        return self.outer(self.inner(n))

    @property
    def nondecreasing(self) -> bool:
        return self.outer.nondecreasing and self.inner.nondecreasing

    def to_json(self) -> Dict[str, Any]:
        return dict(
            kind=self.kind, outer=self.outer.to_json(), inner=self.inner.to_json()
        )


@dataclass(frozen=True)
class MinCounter(CounterFunc):
    """``n ↦ min(inner(n), cap)``; ``min(identity, c)`` is the capped identity."""

    inner: CounterFunc
    cap: int
    kind = "min"

    def __post_init__(self) -> None:
        nat(self.cap)

    def __call__(self, n: int) -> int:
        return min(self.inner(n), self.cap)

    @property
    def nondecreasing(self) -> bool:
        return self.inner.nondecreasing

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind, inner=self.inner.to_json(), cap=self.cap)


@dataclass(frozen=True)
class Exp2Counter(CounterFunc):
    """``n ↦ 2**n``."""

    kind = "exp2"

    def __call__(self, n: int) -> int:
        if n > EXP2_ARGUMENT_LIMIT:
            raise CapExceededError("exp2 argument", EXP2_ARGUMENT_LIMIT)
        return 1 << n

    @property
    def nondecreasing(self) -> bool:
        return True

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind)


def capped_identity(cap: int) -> CounterFunc:
    return MinCounter(IdentityCounter(), cap)


def counter_from_json(obj: Any) -> CounterFunc:
    """Build a :py:class:`CounterFunc` from its JSON form."""
    kind = _kind_of(obj, "counter")
    if kind == "constant":
        return ConstantCounter(nat(_field(obj, "c", "counter")))
    if kind == "identity":
        return IdentityCounter()
    if kind == "affine":
        a, b = _field(obj, "a", "counter"), _field(obj, "b", "counter")
        return AffineCounter(nat(a), nat(b))
    if kind == "table":
        values = _field(obj, "values", "counter")
        if not isinstance(values, list):
            raise ValueError("counter table 'values' must be a list")
        return TableCounter(
            tuple(nat(v) for v in values),
            counter_from_json(_field(obj, "default", "counter")),
        )
    if kind == "compose":
        return ComposeCounter(
            counter_from_json(_field(obj, "outer", "counter")),
            counter_from_json(_field(obj, "inner", "counter")),
        )
    if kind == "min":
        return MinCounter(
            counter_from_json(_field(obj, "inner", "counter")),
            nat(_field(obj, "cap", "counter")),
        )
    if kind == "exp2":
        return Exp2Counter()
    raise ValueError("unknown counter kind %r" % kind)


def eval_counter(g: CounterFunc, n: int) -> int:
    return g(n)


def wt(g: CounterFunc, n: int) -> int:
    """``g̃(n) = n + g(n)``."""
    return n + g(n)


def wt_iter(g: CounterFunc, k: int, caps: Caps = DEFAULT_CAPS, start: int = 0) -> int:
    """
    ``g̃`` applied `k` times to `start` (``g̃^(k)(0)`` by default).

    Stops early once ``g̃`` reaches a fixed point, so ``g ≡ 0`` costs nothing
    for any `k`.

    :raise CapExceededError: if an intermediate value passes ``caps.nat_bits``
        or `k` passes ``caps.iterations`` before a fixed point is reached.
    """
    value = start
    for i in range(k):
        step = wt(g, value)
        if step == value:
            break
        caps.check_iterations(i + 1, "counter iterations")
        value = caps.check_nat(step, "g-tilde iterate")
    return value


# Moduli of uniform continuity omega: (0, inf) -> (0, inf).


class Modulus(object):
    kind = ""

    def __call__(self, delta: Fraction) -> Fraction:
        raise NotImplementedError()

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError()


@dataclass(frozen=True)
class LinearModulus(Modulus):
    """``δ ↦ scale·δ``; a map with Lipschitz constant `L` has scale ``1/L``."""

    scale: Fraction
    kind = "linear"

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", pos_rational(self.scale))

    def __call__(self, delta: Fraction) -> Fraction:
        return self.scale * delta

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind, scale=format_rational(self.scale))


def modulus_from_json(obj: Any) -> Modulus:
    kind = _kind_of(obj, "modulus")
    if kind == "linear":
        return LinearModulus(pos_rational(_field(obj, "scale", "modulus")))
    raise ValueError("unknown modulus kind %r" % kind)


# Rates of convergence beta: (0, inf) -> N.


class Rate(object):
    kind = ""

    def __call__(self, delta: Fraction) -> int:
        raise NotImplementedError()

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError()


@dataclass(frozen=True)
class HarmonicRate(Rate):
    """``δ ↦ ⌈1/δ⌉``, a rate for ``1/(n+1)``."""

    kind = "harmonic"

    def __call__(self, delta: Fraction) -> int:
        return ceil_rational(1 / delta)

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind)


@dataclass(frozen=True)
class GeometricRate(Rate):
    """Least ``n >= 0`` with ``scale·q**n <= δ``, a rate for ``scale·q**n``."""

    q: Fraction
    scale: Fraction = Fraction(1)
    kind = "geometric"

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", to_rational(self.q))
        object.__setattr__(self, "scale", to_rational(self.scale))
        if not 0 < self.q < 1:
            raise ValueError("geometric rate needs q in (0, 1)")
        if self.scale < 0:
            raise ValueError("geometric rate needs a non-negative scale")

    def __call__(self, delta: Fraction) -> int:
        if self.scale <= delta:
            return 0
        return max(0, log_ceil_base_lt1(self.q, delta / self.scale))

    def to_json(self) -> Dict[str, Any]:
        result: Dict[str, Any] = dict(kind=self.kind, q=format_rational(self.q))
        if self.scale != 1:
            result["scale"] = format_rational(self.scale)
        return result


@dataclass(frozen=True)
class ZeroRate(Rate):
    """The rate of a sequence that is identically 0."""

    kind = "zero"

    def __call__(self, delta: Fraction) -> int:
        return 0

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind)


@dataclass(frozen=True)
class ConstantRate(Rate):
    n: int
    kind = "constant"

    def __post_init__(self) -> None:
        nat(self.n)

    def __call__(self, delta: Fraction) -> int:
        return self.n

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind, n=self.n)


@dataclass(frozen=True)
class TableRate(Rate):
    """
    Step rate: ``δ ↦ n`` of the largest threshold ``<= δ``, `default` below
    every threshold.
    """

    steps: Tuple[Tuple[Fraction, int], ...]
    default: Rate
    kind = "table"

    def __post_init__(self) -> None:
        steps = sorted(
            ((pos_rational(d), nat(n)) for d, n in self.steps),
            key=lambda step: step[0],
            reverse=True,
        )
        object.__setattr__(self, "steps", tuple(steps))

    def __call__(self, delta: Fraction) -> int:
        for threshold, n in self.steps:
            if threshold <= delta:
                return n
        return self.default(delta)

    def to_json(self) -> Dict[str, Any]:
        return dict(
            kind=self.kind,
            steps=[[format_rational(d), n] for d, n in self.steps],
            default=self.default.to_json(),
        )


def rate_from_json(obj: Any) -> Rate:
    kind = _kind_of(obj, "rate")
    if kind == "harmonic":
        return HarmonicRate()
    if kind == "zero":
        return ZeroRate()
    if kind == "geometric":
        return GeometricRate(
            to_rational(_field(obj, "q", "rate")),
            to_rational(obj.get("scale", 1)),
        )
    if kind == "constant":
        return ConstantRate(nat(_field(obj, "n", "rate")))
    if kind == "table":
        steps = _field(obj, "steps", "rate")
        if not isinstance(steps, list) or not all(
            isinstance(s, list) and len(s) == 2 for s in steps
        ):
            raise ValueError("rate table 'steps' must be a list of [delta, n] pairs")
        return TableRate(
            tuple((pos_rational(d), nat(n)) for d, n in steps),
            rate_from_json(_field(obj, "default", "rate")),
        )
    raise ValueError("unknown rate kind %r" % kind)


def eval_rate(r: Rate, delta: Fraction) -> int:
    return r(delta)


# Parameter schedules (t_n), (s_n) in [0, 1].


class ParamSchedule(object):
    kind = ""

    def __call__(self, n: int) -> Fraction:
        raise NotImplementedError()

    def supremum(self) -> Fraction:
        """An upper bound of ``sup_n t_n``, exact for every built-in family."""
        raise NotImplementedError()

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError()


@dataclass(frozen=True)
class ConstantSchedule(ParamSchedule):
    t: Fraction
    kind = "constant"

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", unit_rational(self.t))

    def __call__(self, n: int) -> Fraction:
        return self.t

    def supremum(self) -> Fraction:
        return self.t

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind, t=format_rational(self.t))


@dataclass(frozen=True)
class HarmonicSchedule(ParamSchedule):
    """``t_n = 1/(n+1)``."""

    kind = "harmonic"

    def __call__(self, n: int) -> Fraction:
        return Fraction(1, n + 1)

    def supremum(self) -> Fraction:
        return Fraction(1)

    def to_json(self) -> Dict[str, Any]:
        return dict(kind=self.kind)


@dataclass(frozen=True)
class GeometricSchedule(ParamSchedule):
    """``t_n = t0·q**n``."""

    t0: Fraction
    q: Fraction
    kind = "geometric"

    def __post_init__(self) -> None:
        object.__setattr__(self, "t0", unit_rational(self.t0))
        object.__setattr__(self, "q", unit_rational(self.q))

    def __call__(self, n: int) -> Fraction:
        return self.t0 * self.q**n

    def supremum(self) -> Fraction:
        return self.t0

    def to_json(self) -> Dict[str, Any]:
        return dict(
            kind=self.kind, t0=format_rational(self.t0), q=format_rational(self.q)
        )


@dataclass(frozen=True)
class TableSchedule(ParamSchedule):
    """Explicit values for ``n < len(values)``, `default` afterwards."""

    values: Tuple[Fraction, ...]
    default: ParamSchedule
    kind = "table"

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(unit_rational(v) for v in self.values))

    def __call__(self, n: int) -> Fraction:
        if n < len(self.values):
            return self.values[n]
        return self.default(n)

    def supremum(self) -> Fraction:
        return max(self.values + (self.default.supremum(),))

    def to_json(self) -> Dict[str, Any]:
        return dict(
            kind=self.kind,
            values=[format_rational(v) for v in self.values],
            default=self.default.to_json(),
        )


def schedule_from_json(obj: Any) -> ParamSchedule:
    kind = _kind_of(obj, "schedule")
    if kind == "constant":
        return ConstantSchedule(unit_rational(_field(obj, "t", "schedule")))
    if kind == "harmonic":
        return HarmonicSchedule()
    if kind == "geometric":
        return GeometricSchedule(
            unit_rational(_field(obj, "t0", "schedule")),
            unit_rational(_field(obj, "q", "schedule")),
        )
    if kind == "table":
        values = _field(obj, "values", "schedule")
        if not isinstance(values, list):
            raise ValueError("schedule table 'values' must be a list")
        return TableSchedule(
            tuple(unit_rational(v) for v in values),
            schedule_from_json(_field(obj, "default", "schedule")),
        )
    raise ValueError("unknown schedule kind %r" % kind)


def eval_param(s: ParamSchedule, n: int) -> Fraction:
    return s(n)


def rate_for_schedule(schedule: ParamSchedule) -> Optional[Rate]:
    """
    A rate of convergence of `schedule` towards 0, when one is known in
    closed form.

    Since ``x_n - x_{n+1} = t_n(x_n - f(x_n))`` with both points in [0, 1],
    this is also a rate for the difference sequence of a Krasnoselski-Mann
    run (and, for `s`, of ``x_n - y_n`` in an Ishikawa run).
    """
    if isinstance(schedule, HarmonicSchedule):
        return HarmonicRate()
    if isinstance(schedule, ConstantSchedule) and schedule.t == 0:
        return ZeroRate()
    if isinstance(schedule, GeometricSchedule):
        if schedule.t0 == 0 or schedule.q == 0:
            return ZeroRate() if schedule.t0 == 0 else ConstantRate(1)
        if schedule.q < 1:
            return GeometricRate(schedule.q, schedule.t0)
    return None


def check_rate(
    seq: Sequence[Fraction],
    r: Rate,
    deltas: Iterable[Fraction],
    horizon: int,
) -> Verdict:
    """
    Finite certification of a rate of convergence towards 0.

    For every δ with ``r(δ) < horizon``, checks ``|seq[n]| <= δ`` for all
    ``n`` in ``[r(δ), horizon)``. Deltas whose rate lies beyond the horizon
    are vacuous.

    :param seq: at least `horizon` terms.
    :return: failing :py:class:`~metastability.verdict.Verdict` carries the
        witness ``(δ, n)``.
    """
    if len(seq) < horizon:
        raise ValueError("sequence has %d terms, horizon is %d" % (len(seq), horizon))
    checked = 0
    for delta in deltas:
        for n in range(r(delta), horizon):
            checked += 1
            if abs(seq[n]) > delta:
                return Verdict.fail(
                    "|seq[%d]| > %s" % (n, format_rational(delta)),
                    (delta, n),
                    checked,
                )
    return Verdict.ok("certified up to horizon %d" % horizon, checked)


def rate_dominates(
    rate: Rate, reference: Rate, deltas: Iterable[Fraction]
) -> Verdict:
    """Whether ``rate(δ) >= reference(δ)`` at every given δ."""
    checked = 0
    for delta in deltas:
        checked += 1
        if rate(delta) < reference(delta):
            return Verdict.fail(
                "rate below reference at %s" % format_rational(delta), delta, checked
            )
    return Verdict.ok("dominates a closed-form rate", checked)


def sorted_unique(values: Iterable[Fraction]) -> List[Fraction]:
    return sorted(set(values))
