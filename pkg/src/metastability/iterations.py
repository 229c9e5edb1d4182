"""
Exact Picard, Krasnoselski-Mann and Ishikawa runs.
"""
from __future__ import annotations

import enum
import logging
from collections.abc import Sequence as SequenceABC
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union, overload

from metastability.functions import PwlFunction
from metastability.numerics import DEFAULT_CAPS, CapExceededError, Caps, format_rational
from metastability.schedules import ConstantSchedule, ParamSchedule

logger = logging.getLogger(__name__)


class Scheme(str, enum.Enum):
    """Iteration scheme."""

    PICARD = "picard"
    KM = "km"
    ISHIKAWA = "ishikawa"


def _between(v: Fraction, a: Fraction, b: Fraction) -> bool:
    return min(a, b) <= v <= max(a, b)


class IterationRun(object):
    """
    A run that grows on demand.

    ``xs[n]`` is always exact. For the Ishikawa scheme ``ys[n]`` is the
    inner point ``s_n f(x_n) + (1 - s_n) x_n``; for the other schemes
    `ys` stays empty. Picard runs use ``t ≡ 1``.

    :param scheme: :py:class:`Scheme` or its name.
    :param f: the self-map.
    :param t: outer schedule (ignored for Picard).
    :param s: inner schedule, required for Ishikawa.
    :param x0: starting point.
    :param caps: ``caps.horizon`` bounds the number of points.
    """

    def __init__(
        self,
        scheme: Union[Scheme, str],
        f: PwlFunction,
        t: Optional[ParamSchedule],
        s: Optional[ParamSchedule],
        x0: Fraction,
        caps: Caps = DEFAULT_CAPS,
    ):
        self.scheme = Scheme(scheme)
        if self.scheme == Scheme.PICARD:
            t = ConstantSchedule(Fraction(1))
        if t is None:
            raise ValueError("%s needs a t schedule" % self.scheme.value)
        if self.scheme == Scheme.ISHIKAWA and s is None:
            raise ValueError("ishikawa needs an s schedule")
        if not 0 <= x0 <= 1:
            raise ValueError("x0 outside [0, 1]: %s" % format_rational(x0))
        self.f = f
        self.t = t
        self.s = s if self.scheme == Scheme.ISHIKAWA else None
        self.caps = caps
        self.xs: List[Fraction] = [x0]
        self.ys: List[Fraction] = []
        self._fx: List[Fraction] = [f(x0)]
        if self.s is not None:
            self.ys.append(self._inner(0))

    def _inner(self, n: int) -> Fraction:
        assert self.s is not None
        s_n = self.s(n)
        return s_n * self._fx[n] + (1 - s_n) * self.xs[n]

    def __len__(self) -> int:
        return len(self.xs)

    def f_of_x(self, n: int) -> Fraction:
        """``f(x_n)``, cached."""
        self.extend(n + 1)
        return self._fx[n]

    def extend(self, length: int) -> IterationRun:
        """
        Grow the run to at least `length` points.

        :raise CapExceededError: if `length` passes ``caps.horizon``.
        """
        if length > self.caps.horizon:
            raise CapExceededError("run length", self.caps.horizon)
        if length > len(self.xs):
            logger.debug(
                "Extending %s run from %d to %d points"
                % (self.scheme.value, len(self.xs), length)
            )
        while len(self.xs) < length:
            n = len(self.xs) - 1
            x, t_n = self.xs[n], self.t(n)
            if self.s is not None:
                target = self.f(self.ys[n])
            else:
                target = self._fx[n]
            x_next = (1 - t_n) * x + t_n * target
            self.xs.append(x_next)
            self._fx.append(self.f(x_next))
            if self.s is not None:
                self.ys.append(self._inner(n + 1))
        return self

    def view(self, limit: int) -> RunView:
        """A lazily extended read-only view of the first `limit` points."""
        return RunView(self, limit)

    def differences(self, length: int) -> List[Fraction]:
        """``x_n - x_{n+1}`` for ``n < length``."""
        self.extend(length + 1)
        return [self.xs[n] - self.xs[n + 1] for n in range(length)]

    def inner_gaps(self, length: int) -> List[Fraction]:
        """``x_n - y_n`` for ``n < length`` (Ishikawa only)."""
        if self.s is None:
            raise ValueError("inner gaps exist only for ishikawa runs")
        self.extend(length)
        return [self.xs[n] - self.ys[n] for n in range(length)]

    def betweenness_violation(self) -> Optional[int]:
        """
        First `n` whose step leaves the scheme's betweenness hypothesis:
        ``x_{n+1}`` between ``x_n`` and ``f(x_n)`` (KM, Picard), or ``y_n``
        between ``x_n`` and ``f(x_n)`` and ``x_{n+1}`` between ``x_n`` and
        ``f(y_n)`` (Ishikawa). `None` if every generated step complies.
        """
        for n in range(len(self.xs) - 1):
            x, fx, x_next = self.xs[n], self._fx[n], self.xs[n + 1]
            if self.s is None:
                if not _between(x_next, x, fx):
                    return n
            else:
                y = self.ys[n]
                if not _between(y, x, fx) or not _between(x_next, x, self.f(y)):
                    return n
        return None

    def is_monotone(self, length: Optional[int] = None) -> bool:
        """Whether the first `length` points are nondecreasing or nonincreasing."""
        if length is not None:
            self.extend(length)
        xs = self.xs if length is None else self.xs[:length]
        steps = [b - a for a, b in zip(xs, xs[1:])]
        return all(d >= 0 for d in steps) or all(d <= 0 for d in steps)

    def to_json(self) -> Dict[str, Any]:
        result: Dict[str, Any] = dict(
            scheme=self.scheme.value,
            f=self.f.to_json(),
            t=self.t.to_json(),
            xs=[format_rational(x) for x in self.xs],
        )
        if self.s is not None:
            result["s"] = self.s.to_json()
            result["ys"] = [format_rational(y) for y in self.ys]
        return result


class RunView(SequenceABC):
    """Sequence of length `limit` backed by a run that extends on access."""

    def __init__(self, run: IterationRun, limit: int):
        self.run = run
        self.limit = limit

    def __len__(self) -> int:
        return self.limit

    @overload
    def __getitem__(self, index: int) -> Fraction:
        ...

    @overload
    def __getitem__(self, index: slice) -> Sequence[Fraction]:
        ...

    def __getitem__(self, index: Any) -> Any:
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(self.limit))]
        if index < 0:
            index += self.limit
        if not 0 <= index < self.limit:
            raise IndexError(index)
        self.run.extend(index + 1)
        return self.run.xs[index]


def run_iteration(
    scheme: Union[Scheme, str],
    f: PwlFunction,
    t: Optional[ParamSchedule],
    s: Optional[ParamSchedule],
    x0: Fraction,
    length: int,
    caps: Caps = DEFAULT_CAPS,
) -> IterationRun:
    """Generate an exact run with `length` points."""
    return IterationRun(scheme, f, t, s, x0, caps).extend(length)


def sign_sequence(run: IterationRun, length: int) -> List[int]:
    """
    ``σ_0 = 1``; ``σ_{n+1} = sgn(f(x_n) - x_n)`` when nonzero, else ``σ_n``.

    Needs ``length - 1`` points of the run.
    """
    if length <= 0:
        return []
    run.extend(length - 1)
    sigma = [1]
    for n in range(length - 1):
        gap = run.f_of_x(n) - run.xs[n]
        sigma.append(sigma[-1] if gap == 0 else (1 if gap > 0 else -1))
    return sigma


class SwitchTail(str, enum.Enum):
    """What is known after the last finite switching index."""

    HORIZON_LIMITED = "no switch up to horizon"
    CERTIFIED_INFINITE = "certified infinite"


@dataclass(frozen=True)
class SwitchTrace(object):
    """
    Sign sequence and the finite prefix of the switching sequence.

    :ivar sigma: ``σ_0 .. σ_{length-1}``.
    :ivar q: ``q_0 = 0`` and every later finite switching index found inside
        the horizon; ``q_r`` for ``r >= len(q)`` is infinite as far as the
        horizon can tell (see `tail`).
    :ivar tail: whether the next entry is provably infinite or only absent
        up to the horizon.
    """

    sigma: Tuple[int, ...]
    q: Tuple[int, ...]
    tail: SwitchTail

    def switch(self, r: int) -> Optional[int]:
        """``q_r``, or `None` for infinity."""
        return self.q[r] if r < len(self.q) else None

    def finite_pairs(self) -> List[Tuple[int, int, int]]:
        """``(r, q_r, q_{r+1})`` for every ``r >= 1`` with both finite."""
        return [(r, self.q[r], self.q[r + 1]) for r in range(1, len(self.q) - 1)]

    def to_json(self) -> Dict[str, Any]:
        return dict(sigma=list(self.sigma), q=list(self.q), tail=self.tail.value)


def switching_sequence(run: IterationRun, length: int) -> SwitchTrace:
    """
    Switching indices of `run` inside a horizon of `length` sign values.

    ``q_{r+1}`` is the least ``k > q_r`` with ``σ_{k+1} = -σ_{q_r+1}``. When
    no such `k` appears, the tail is certified infinite only if ``f(x) - x``
    never takes the opposite sign anywhere on [0, 1].
    """
    sigma = sign_sequence(run, length)
    q = [0]
    if length < 2:
        return SwitchTrace(tuple(sigma), tuple(q), SwitchTail.HORIZON_LIMITED)
    current = sigma[1]
    for k in range(1, length - 1):
        if sigma[k + 1] == -current:
            q.append(k)
            current = sigma[k + 1]
    # sigma can never flip to a sign f(x) - x never takes on [0, 1], and a
    # run that has reached a fixed point stays there.
    last = len(sigma) - 2
    tail = (
        SwitchTail.CERTIFIED_INFINITE
        if run.f.displacement_sign_bound() == current
        or _is_identity(run.f)
        or run.f_of_x(last) == run.xs[last]
        else SwitchTail.HORIZON_LIMITED
    )
    return SwitchTrace(tuple(sigma), tuple(q), tail)


def _is_identity(f: PwlFunction) -> bool:
    return all(x == y for x, y in f.breakpoints)


def monotone_between_switches(run: IterationRun, trace: SwitchTrace) -> Optional[int]:
    """
    First index `n` where ``(x_n)`` fails to be monotone on a block
    ``[q_r, q_{r+1})`` of the switching sequence, `None` if every block
    inside the horizon is monotone.
    """
    ends = list(trace.q[1:]) + [len(trace.sigma) - 1]
    for start, end in zip(trace.q, ends):
        run.extend(end)
        direction = 0
        for n in range(start, end - 1):
            step = run.xs[n + 1] - run.xs[n]
            if step == 0:
                continue
            sign = 1 if step > 0 else -1
            if direction and sign != direction:
                return n
            direction = sign
    return None
