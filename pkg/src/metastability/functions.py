"""
Piecewise-linear self-maps of the unit interval.
"""
from __future__ import annotations

import bisect
import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, List, Optional, Sequence, Tuple

from metastability.numerics import format_rational, to_rational, unit_rational
from metastability.schedules import LinearModulus, Modulus
from metastability.verdict import Verdict

logger = logging.getLogger(__name__)

Breakpoint = Tuple[Fraction, Fraction]


class FixedPointKind(str, enum.Enum):
    """
    Where a fixed point sits on the scanned piece.

    `EXACT_ON_SEGMENT` is a strict interior solution of the linear equation
    ``f(x) = x`` on one piece; `SEGMENT_ENDPOINT` is a breakpoint or an end of
    the scanned interval.
    """

    EXACT_ON_SEGMENT = "exact-on-segment"
    SEGMENT_ENDPOINT = "segment-endpoint"


@dataclass(frozen=True)
class FixedPoint(object):
    location: Fraction
    kind: FixedPointKind


class PwlFunction(object):
    """
    Piecewise-linear map ``[0, 1] -> [0, 1]`` with rational breakpoints.

    :param breakpoints: ``(x, y)`` pairs with strictly increasing `x`, first
        ``x = 0`` and last ``x = 1``, every `y` in [0, 1].
    :raise ValueError: if any of the above fails.

    Example::

        tent = PwlFunction([(0, 0), ("1/2", 1), (1, 0)])
        assert tent(Fraction(1, 4)) == Fraction(1, 2)
    """

    def __init__(self, breakpoints: Iterable[Tuple[Any, Any]]):
        points: List[Breakpoint] = [
            (unit_rational(x), unit_rational(y)) for x, y in breakpoints
        ]
        if len(points) < 2:
            raise ValueError("need at least 2 breakpoints, got %d" % len(points))
        if points[0][0] != 0 or points[-1][0] != 1:
            raise ValueError("breakpoints must start at x = 0 and end at x = 1")
        for (x0, _), (x1, _) in zip(points, points[1:]):
            if not x0 < x1:
                raise ValueError(
                    "breakpoint x values must increase strictly: %s, %s"
                    % (format_rational(x0), format_rational(x1))
                )
        self._points: Tuple[Breakpoint, ...] = tuple(points)
        self._xs = [x for x, _ in points]

    @classmethod
    def identity(cls) -> PwlFunction:
        return cls([(0, 0), (1, 1)])

    @classmethod
    def reflection(cls) -> PwlFunction:
        """``x ↦ 1 - x``."""
        return cls([(0, 1), (1, 0)])

    @classmethod
    def tent(cls) -> PwlFunction:
        return cls([(0, 0), (Fraction(1, 2), 1), (1, 0)])

    @classmethod
    def constant(cls, c: Any) -> PwlFunction:
        return cls([(0, c), (1, c)])

    @property
    def breakpoints(self) -> Tuple[Breakpoint, ...]:
        return self._points

    def segments(self) -> Iterator[Tuple[Breakpoint, Breakpoint]]:
        return zip(self._points, self._points[1:])

    def slopes(self) -> List[Fraction]:
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in self.segments()]

    def __call__(self, x: Fraction) -> Fraction:
        return self.eval(x)

    def eval(self, x: Fraction) -> Fraction:
        """Exact linear interpolation between the adjacent breakpoints."""
        if not 0 <= x <= 1:
            raise ValueError("argument outside [0, 1]: %s" % format_rational(x))
        i = bisect.bisect_right(self._xs, x) - 1
        if i >= len(self._points) - 1:
            return self._points[-1][1]
        (x0, y0), (x1, y1) = self._points[i], self._points[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def lipschitz_constant(self) -> Fraction:
        """
        Least Lipschitz constant, the maximum absolute slope. A constant map
        gets the conventional value 1 so that ``δ/L`` stays defined.
        """
        slope = max(abs(s) for s in self.slopes())
        return slope if slope > 0 else Fraction(1)

    @property
    def is_monotone(self) -> bool:
        """Whether every slope is nonnegative."""
        return all(s >= 0 for s in self.slopes())

    def displacement_sign_bound(self) -> int:
        """
        ``1`` if ``f(x) >= x`` on all of [0, 1], ``-1`` if ``f(x) <= x``
        everywhere, ``0`` otherwise (checked at the breakpoints, which is
        exact for a piecewise-linear map).
        """
        gaps = [y - x for x, y in self._points]
        if all(d >= 0 for d in gaps):
            return 1
        if all(d <= 0 for d in gaps):
            return -1
        return 0

    def _pieces(self, a: Fraction, b: Fraction) -> Iterator[Tuple[Fraction, Fraction]]:
        """Pieces of [a, b] on which `f` is affine, left to right."""
        cuts = [x for x in self._xs if a < x < b]
        edges = [a] + cuts + [b]
        return zip(edges, edges[1:]) if a < b else iter([(a, a)])

    def least_fixed_point_in(self, a: Fraction, b: Fraction) -> Optional[FixedPoint]:
        """
        Smallest ``x`` in ``[a, b]`` with ``f(x) = x``, by scanning the pieces
        of ``f(x) - x`` for zeros and sign changes.

        :return: `None` when there is no fixed point in ``[a, b]``.
        """
        if a > b:
            raise ValueError(
                "empty interval [%s, %s]" % (format_rational(a), format_rational(b))
            )
        for left, right in self._pieces(a, b):
            g_left = self.eval(left) - left
            if g_left == 0:
                return FixedPoint(left, FixedPointKind.SEGMENT_ENDPOINT)
            g_right = self.eval(right) - right
            if (g_left < 0) != (g_right < 0) and g_right != 0:
                root = left + g_left * (right - left) / (g_left - g_right)
                return FixedPoint(root, FixedPointKind.EXACT_ON_SEGMENT)
            if g_right == 0:
                return FixedPoint(right, FixedPointKind.SEGMENT_ENDPOINT)
        return None

    def fixed_point_set_in(
        self, a: Fraction, b: Fraction
    ) -> List[Tuple[Fraction, Fraction]]:
        """
        All fixed points in ``[a, b]`` as closed intervals ``(lo, hi)``;
        isolated fixed points have ``lo == hi``. Adjacent intervals are
        merged.
        """
        found: List[Tuple[Fraction, Fraction]] = []

        def add(lo: Fraction, hi: Fraction) -> None:
            if found and found[-1][1] >= lo:
                found[-1] = (found[-1][0], max(found[-1][1], hi))
            else:
                found.append((lo, hi))

        for left, right in self._pieces(a, b):
            g_left = self.eval(left) - left
            g_right = self.eval(right) - right
            if g_left == 0 and g_right == 0:
                add(left, right)
            elif g_left == 0:
                add(left, left)
            elif g_right == 0:
                add(right, right)
            elif (g_left < 0) != (g_right < 0):
                root = left + g_left * (right - left) / (g_left - g_right)
                add(root, root)
        return found

    def to_json(self) -> List[List[int]]:
        """Breakpoints as ``[x_num, x_den, y_num, y_den]`` quadruples."""
        return [
            [x.numerator, x.denominator, y.numerator, y.denominator]
            for x, y in self._points
        ]

    @classmethod
    def from_json(cls, data: Any) -> PwlFunction:
        if not isinstance(data, list):
            raise ValueError("function must be a list of breakpoint quadruples")
        points = []
        for i, quad in enumerate(data):
            if (
                not isinstance(quad, list)
                or len(quad) != 4
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in quad)
            ):
                raise ValueError("breakpoint %d must be four integers" % i)
            if quad[1] <= 0 or quad[3] <= 0:
                raise ValueError("breakpoint %d has a non-positive denominator" % i)
            points.append((Fraction(quad[0], quad[1]), Fraction(quad[2], quad[3])))
        return cls(points)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PwlFunction) and self._points == other._points

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        return "PwlFunction(%s)" % ", ".join(
            "(%s, %s)" % (format_rational(x), format_rational(y))
            for x, y in self._points
        )


def modulus_from_lipschitz(L: Fraction) -> Modulus:
    """``ω(δ) = δ/L``, a modulus of uniform continuity of any L-Lipschitz map."""
    L = to_rational(L)
    if L <= 0:
        raise ValueError("Lipschitz constant must be positive")
    return LinearModulus(1 / L)


def check_modulus(
    f: PwlFunction, omega: Modulus, deltas: Sequence[Fraction]
) -> Verdict:
    """
    Certify ``|x - y| < ω(δ) ⇒ |f(x) - f(y)| < δ`` for each δ.

    For a piecewise-linear map ``ω(δ)·L <= δ`` suffices, so a pass is a
    proof; a failure only means the modulus could not be certified this way.

    :return: failing verdict carries the first failing δ as witness.
    """
    if not deltas:
        raise ValueError("need at least one delta")
    L = f.lipschitz_constant()
    for i, delta in enumerate(deltas):
        if omega(delta) * L > delta:
            return Verdict.fail(
                "omega(%s) * L > %s" % (format_rational(delta), format_rational(delta)),
                delta,
                i + 1,
            )
    return Verdict.ok(checked=len(deltas))
