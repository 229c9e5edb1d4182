"""
Rates of metastability.

Each calculator returns its full trace rather than only the final bound, so
that callers (and the test suite) can assert the elementary facts the
convergence arguments start from.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from metastability.numerics import (
    DEFAULT_CAPS,
    Caps,
    ceil_rational,
    format_nat,
    format_rational,
    log_ceil_base_lt1,
)
from metastability.schedules import (
    CounterFunc,
    Modulus,
    Rate,
    sorted_unique,
    wt,
    wt_iter,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KmBoundTrace(object):
    """
    Trace of the Krasnoselski-Mann or Ishikawa recursion.

    :ivar m: ``⌈6/ε⌉``.
    :ivar c: ``1/(4m)``.
    :ivar u: ``u_0 .. u_{2m²}``.
    :ivar phi: the bound, ``u[-1]``.
    :ivar beta_args: arguments at which β was evaluated.
    :ivar gamma_args: arguments at which γ was evaluated (Ishikawa only).
    :ivar omega_args: arguments at which ω was evaluated.
    """

    m: int
    c: Fraction
    u: Tuple[int, ...]
    phi: int
    beta_args: Tuple[Fraction, ...] = ()
    gamma_args: Tuple[Fraction, ...] = ()
    omega_args: Tuple[Fraction, ...] = ()

    def summary(self) -> Dict[str, Any]:
        return dict(
            m=format_nat(self.m),
            c=format_rational(self.c),
            steps=format_nat(len(self.u) - 1),
            u0=format_nat(self.u[0]),
            phi=format_nat(self.phi),
        )

    def to_json(self) -> Dict[str, Any]:
        result = self.summary()
        result["u"] = [format_nat(v) for v in self.u]
        return result


@dataclass(frozen=True)
class PsiBoundTrace(object):
    """
    Trace of the Lipschitz recursion.

    :ivar P: ``P_0 .. P_B``.
    :ivar T: ``⌈log_{1-δ/2} ε⌉ + 1``.
    :ivar B: ``T + g̃(P_T) + 1``.
    :ivar psi: the bound, ``P_B``.
    :ivar flags: notes such as ``"epsilon>=1"``.
    """

    P: Tuple[int, ...]
    T: int
    B: int
    psi: int
    flags: Tuple[str, ...] = field(default=())

    def summary(self) -> Dict[str, Any]:
        return dict(
            T="%d" % self.T,
            B="%d" % self.B,
            steps=format_nat(len(self.P) - 1),
            psi=format_nat(self.psi),
        )

    def to_json(self) -> Dict[str, Any]:
        result = self.summary()
        result["P"] = [format_nat(v) for v in self.P]
        if self.flags:
            result["flags"] = list(self.flags)
        return result


def _check_epsilon(epsilon: Fraction) -> None:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive, got %s" % format_rational(epsilon))


def fmcp_bound(epsilon: Fraction, g: CounterFunc, caps: Caps = DEFAULT_CAPS) -> int:
    """
    Rate of metastability for monotone sequences in [0, 1]:
    ``g̃^(⌈1/ε⌉)(0)``.
    """
    _check_epsilon(epsilon)
    return wt_iter(g, ceil_rational(1 / epsilon), caps)


def _m(epsilon: Fraction) -> int:
    return ceil_rational(6 / epsilon)


def _u_steps(m: int, caps: Caps) -> int:
    steps = 2 * m * m
    caps.check_iterations(steps, "recursion length 2m^2")
    return steps


def phi_km(
    epsilon: Fraction,
    g: CounterFunc,
    omega: Modulus,
    beta: Rate,
    caps: Caps = DEFAULT_CAPS,
) -> KmBoundTrace:
    """
    Rate of metastability for sequences with ``x_{n+1}`` between ``x_n``
    and ``f(x_n)``, given a modulus `omega` of `f` and a rate `beta` for
    ``x_n - x_{n+1} → 0``.

    With ``m = ⌈6/ε⌉``, ``c = 1/(4m)``, ``A(p) = 1/max(1, 12·m·g(p))`` and
    ``C(p) = min(A(p), ω(A(p)))``::

        u_0     = β(c)
        u_{n+1} = max(u_n + g(u_n) + 1, β(C(u_n)))

    and the bound is ``u_{2m²}``.

    :raise CapExceededError: if some ``u_n`` passes ``caps.nat_bits``.
    """
    _check_epsilon(epsilon)
    m = _m(epsilon)
    c = Fraction(1, 4 * m)
    steps = _u_steps(m, caps)
    beta_args = {c}
    omega_args = set()

    u = [caps.check_nat(beta(c), "u_0")]
    for n in range(steps):
        p = u[-1]
        gp = g(p)
        a = Fraction(1, max(1, 12 * m * gp))
        omega_args.add(a)
        c_p = min(a, omega(a))
        beta_args.add(c_p)
        u.append(caps.check_nat(max(p + gp + 1, beta(c_p)), "u_%d" % (n + 1)))

    logger.debug("phi_km: m=%d, %d steps, phi=%d" % (m, steps, u[-1]))
    return KmBoundTrace(
        m=m,
        c=c,
        u=tuple(u),
        phi=u[-1],
        beta_args=tuple(sorted_unique(beta_args)),
        omega_args=tuple(sorted_unique(omega_args)),
    )


def phi_i(
    epsilon: Fraction,
    g: CounterFunc,
    omega: Modulus,
    beta: Rate,
    gamma: Rate,
    caps: Caps = DEFAULT_CAPS,
) -> KmBoundTrace:
    """
    Rate of metastability for Ishikawa-type sequences, given in addition a
    rate `gamma` for ``x_n - y_n → 0``.

    With ``B(p) = 1/max(1, 8·m·g(p))``, ``Z(p) = min(B(p), ω(B(p)))`` and
    ``C(p) = min(Z(p)/3, ω(Z(p)/3))``::

        u_0     = β(c)
        u_{n+1} = max(u_n + g(u_n) + 1, β(C(u_n)/2), γ(C(u_n)/2))

    `Z` is the ω-dependent one in both places it occurs.
    """
    _check_epsilon(epsilon)
    m = _m(epsilon)
    c = Fraction(1, 4 * m)
    steps = _u_steps(m, caps)
    beta_args = {c}
    gamma_args = set()
    omega_args = set()

    u = [caps.check_nat(beta(c), "u_0")]
    for n in range(steps):
        p = u[-1]
        gp = g(p)
        b = Fraction(1, max(1, 8 * m * gp))
        z = min(b, omega(b))
        c_p = min(z / 3, omega(z / 3))
        omega_args.update((b, z / 3))
        half = c_p / 2
        beta_args.add(half)
        gamma_args.add(half)
        u.append(
            caps.check_nat(max(p + gp + 1, beta(half), gamma(half)), "u_%d" % (n + 1))
        )

    logger.debug("phi_i: m=%d, %d steps, phi=%d" % (m, steps, u[-1]))
    return KmBoundTrace(
        m=m,
        c=c,
        u=tuple(u),
        phi=u[-1],
        beta_args=tuple(sorted_unique(beta_args)),
        gamma_args=tuple(sorted_unique(gamma_args)),
        omega_args=tuple(sorted_unique(omega_args)),
    )


def psi_km(
    epsilon: Fraction,
    g: CounterFunc,
    delta: Fraction,
    caps: Caps = DEFAULT_CAPS,
) -> PsiBoundTrace:
    """
    Rate of metastability for Krasnoselski-Mann runs of an L-Lipschitz map
    with every ``t_n <= (2 - δ)/(L + 1)``. Independent of `L`.

    With ``h_m(n) = g(m + n)`` and ``K = ⌈1/ε⌉``::

        P_0     = 0
        P_{n+1} = P_n + h̃_{P_n}^(K+1)(0)
        T       = ⌈log_{1-δ/2} ε⌉ + 1
        B       = T + g̃(P_T) + 1

    and the bound is ``P_B``. For ``ε >= 1`` the formula is evaluated as
    written and the trace is flagged.
    """
    _check_epsilon(epsilon)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1), got %s" % format_rational(delta))
    k = ceil_rational(1 / epsilon) + 1
    T = log_ceil_base_lt1(1 - delta / 2, epsilon, caps) + 1
    flags: List[str] = []
    if epsilon >= 1:
        flags.append("epsilon>=1")

    P = [0]

    def grow(upto: int) -> None:
        caps.check_iterations(upto, "P recursion length")
        while len(P) <= upto:
            offset = P[-1]
            shifted = _Shifted(g, offset)
            step = wt_iter(shifted, k, caps)
            P.append(caps.check_nat(offset + step, "P_%d" % len(P)))

    P_T = 0
    if T > 0:
        grow(T)
        P_T = P[T]
    B = caps.check_nat(T + wt(g, P_T) + 1, "B")
    if B < 0:
        # Only reachable for epsilon far above 1.
        flags.append("B<0")
        B = 0
    grow(B)
    psi = P[B]
    logger.debug("psi_km: T=%d, B=%d, psi=%d" % (T, B, psi))
    return PsiBoundTrace(P=tuple(P[: B + 1]), T=T, B=B, psi=psi, flags=tuple(flags))


class _Shifted(CounterFunc):
    """``n ↦ g(offset + n)``."""

    def __init__(self, g: CounterFunc, offset: int):
        self.g = g
        self.offset = offset

    def __call__(self, n: int) -> int:
        return self.g(self.offset + n)


def trace_violations(
    trace: KmBoundTrace,
    g: CounterFunc,
    beta: Rate,
    omega: Optional[Modulus] = None,
    gamma: Optional[Rate] = None,
) -> List[str]:
    """
    The opening facts of the Krasnoselski-Mann and Ishikawa arguments that
    `trace` violates (empty when all hold):

    - ``u_{n+1} > u_n + g(u_n)``;
    - ``u_0 = β(c)`` and ``β(c) <= u_n``;
    - ``β(C(u_n)) <= u_{n+1}`` (KM) or ``β(C(u_n)/2), γ(C(u_n)/2) <=
      u_{n+1}`` (Ishikawa, when `gamma` is given).
    """
    found = []
    u = trace.u
    if u[0] != beta(trace.c):
        found.append("u_0 != beta(c)")
    if trace.phi != u[-1]:
        found.append("phi != u[-1]")
    for n in range(len(u) - 1):
        p = u[n]
        if not u[n + 1] > p + g(p):
            found.append("u_%d <= u_%d + g(u_%d)" % (n + 1, n, n))
        if not beta(trace.c) <= p:
            found.append("beta(c) > u_%d" % n)
        if omega is None:
            continue
        m, gp = trace.m, g(p)
        if gamma is None:
            a = Fraction(1, max(1, 12 * m * gp))
            if beta(min(a, omega(a))) > u[n + 1]:
                found.append("beta(C(u_%d)) > u_%d" % (n, n + 1))
        else:
            b = Fraction(1, max(1, 8 * m * gp))
            z = min(b, omega(b))
            half = min(z / 3, omega(z / 3)) / 2
            if beta(half) > u[n + 1] or gamma(half) > u[n + 1]:
                found.append("beta/gamma(C(u_%d)/2) > u_%d" % (n, n + 1))
    return found


def psi_violations(
    trace: PsiBoundTrace, epsilon: Fraction, delta: Fraction
) -> List[str]:
    """
    The opening facts of the Lipschitz argument that `trace` violates: `P`
    nondecreasing and ``(1 - δ/2)^(T-1) <= ε``.
    """
    found = []
    for n in range(len(trace.P) - 1):
        if trace.P[n] > trace.P[n + 1]:
            found.append("P_%d > P_%d" % (n, n + 1))
    if (1 - delta / 2) ** (trace.T - 1) > epsilon:
        found.append("(1 - delta/2)^(T-1) > epsilon")
    if trace.psi != trace.P[trace.B]:
        found.append("psi != P_B")
    return found
