"""
Exact naturals and rationals.

Every quantity in this package is either a Python ``int`` (a natural number)
or a :py:class:`fractions.Fraction`. Floating point never enters a bound
computation: the recursions amplify any rounding into a wrong natural.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Optional

logger = logging.getLogger(__name__)

DEFAULT_NAT_BITS = 4096
DEFAULT_HORIZON = 100000
DEFAULT_SEARCH = 100000
DEFAULT_ITERATIONS = 10**6


class CapExceededError(RuntimeError):
    """
    A configured cap was passed.

    :ivar what: name of the quantity that grew too large.
    :ivar limit: the cap that was passed.
    """

    def __init__(self, what: str, limit: int):
        super(CapExceededError, self).__init__(
            "cap exceeded: %s passes limit %d" % (what, limit)
        )
        self.what = what
        self.limit = limit


@dataclass(frozen=True)
class Caps(object):
    """
    Computation caps.

    :ivar nat_bits: maximum bit length of any natural in a bound trace.
    :ivar horizon: maximum length of a generated sequence.
    :ivar search: maximum N examined by the least-metastable search.
    :ivar iterations: maximum number of loop iterations of a single
        calculator step (powers in :py:func:`log_ceil_base_lt1`, recursion
        lengths).
    """

    nat_bits: int = DEFAULT_NAT_BITS
    horizon: int = DEFAULT_HORIZON
    search: int = DEFAULT_SEARCH
    iterations: int = DEFAULT_ITERATIONS

    @classmethod
    def from_env(cls) -> Caps:
        """
        Read caps from `METASTABILITY_CAP_BITS`, `METASTABILITY_HORIZON`,
        `METASTABILITY_SEARCH` and `METASTABILITY_ITERATIONS`, falling back
        to the defaults.
        """
        return cls(
            nat_bits=_env_int("METASTABILITY_CAP_BITS", DEFAULT_NAT_BITS),
            horizon=_env_int("METASTABILITY_HORIZON", DEFAULT_HORIZON),
            search=_env_int("METASTABILITY_SEARCH", DEFAULT_SEARCH),
            iterations=_env_int("METASTABILITY_ITERATIONS", DEFAULT_ITERATIONS),
        )

    def override(self, **kwargs: Optional[int]) -> Caps:
        """Return a copy with the given non-`None` fields replaced."""
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def check_nat(self, value: int, what: str = "natural") -> int:
        """Raise :py:class:`CapExceededError` if `value` is too wide."""
        if value.bit_length() > self.nat_bits:
            raise CapExceededError("%s bit length" % what, self.nat_bits)
        return value

    def check_iterations(self, count: int, what: str = "iterations") -> int:
        if count > self.iterations:
            raise CapExceededError(what, self.iterations)
        return count


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None:
        return default
    try:
        result = int(value)
    except ValueError:
        raise ValueError("%s must be an integer, got %r" % (name, value))
    if result <= 0:
        raise ValueError("%s must be positive, got %d" % (name, result))
    return result


DEFAULT_CAPS = Caps()


def to_rational(value: Any) -> Fraction:
    """
    Convert `value` to an exact rational.

    Accepts `int`, :py:class:`~fractions.Fraction`, and strings of the form
    ``"num/den"`` or ``"int"``. Floats and booleans are rejected.
    """
    if isinstance(value, bool):
        raise TypeError("cannot convert bool to a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError("decimal notation is not exact: %r" % value)
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValueError("invalid rational: %r" % value)
    raise TypeError("cannot convert %s to a rational" % type(value).__name__)


def nat(value: Any) -> int:
    """Validate a natural number (accepts `int` or a decimal string)."""
    if isinstance(value, bool):
        raise TypeError("cannot convert bool to a natural")
    if isinstance(value, str):
        if not value.strip().isdigit():
            raise ValueError("invalid natural: %r" % value)
        value = int(value)
    if not isinstance(value, int):
        raise TypeError("cannot convert %s to a natural" % type(value).__name__)
    if value < 0:
        raise ValueError("natural must be non-negative, got %d" % value)
    return value


def pos_rational(value: Any) -> Fraction:
    """Validate a positive rational."""
    q = to_rational(value)
    if q <= 0:
        raise ValueError("expected a positive rational, got %s" % format_rational(q))
    return q


def unit_rational(value: Any) -> Fraction:
    """Validate a rational in [0, 1]."""
    q = to_rational(value)
    if not 0 <= q <= 1:
        raise ValueError("expected a rational in [0, 1], got %s" % format_rational(q))
    return q


def format_rational(q: Fraction) -> str:
    """Wire form ``"num/den"``; integers keep the ``"/1"`` suffix."""
    return "%d/%d" % (q.numerator, q.denominator)


def format_nat(n: int) -> str:
    return "%d" % n


def ceil_rational(p: Fraction) -> int:
    """
    Least integer `n` with ``n >= p``.

    Used for ``⌈6/ε⌉``, ``⌈1/ε⌉`` and ``⌈1/δ⌉``; exact for any rational.
    """
    return -((-p.numerator) // p.denominator)


def log_ceil_base_lt1(
    b: Fraction, e: Fraction, caps: Caps = DEFAULT_CAPS
) -> int:
    """
    Least integer `k` with ``b**k <= e``, i.e. ``⌈log_b e⌉`` for a base in
    (0, 1).

    Computed by repeated rational multiplication. The result is non-positive
    when ``e >= 1``.

    :param b: base, ``0 < b < 1``.
    :param e: argument, ``e > 0``.
    :raise CapExceededError: if more than ``caps.iterations`` powers are
        needed.
    """
    if not 0 < b < 1:
        raise ValueError("base must lie in (0, 1), got %s" % format_rational(b))
    if e <= 0:
        raise ValueError("argument must be positive, got %s" % format_rational(e))

    k = 0
    power = Fraction(1)
    if e >= 1:
        # b**k is decreasing in k; walk down while b**(k-1) still fits.
        while power / b <= e:
            power /= b
            k -= 1
            caps.check_iterations(-k, "logarithm iterations")
        return k
    while power > e:
        power *= b
        k += 1
        caps.check_iterations(k, "logarithm iterations")
    return k

