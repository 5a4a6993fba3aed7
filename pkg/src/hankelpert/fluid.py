"""Continuum (electrostatic) approximation for the eigenvalue density.

For large matrix size n the zeros of the degree-n orthogonal polynomial, or
equivalently the eigenvalues of the associated ensemble, condense onto a band
[a_n, b_n] inside (-1, 1) with an equilibrium density sigma. Both are
determined by the external potential

    v(x) = -ln w(x),   v'(x) = alpha/(1-x) - beta/(1+x),

through the conditions that sigma integrate to n over the band and that the
field vanish there. For the weight (1-x)^alpha (1+x)^beta these conditions
close in elementary form:

    a_n, b_n  =  (beta^2 - alpha^2 -/+ 4 sqrt(n (n+alpha) (n+beta) (n+s)))
                 / (2n+s)^2,                               s = alpha + beta,

    sigma(x)  =  (n + s/2) sqrt((b_n - x)(x - a_n)) / (pi (1 - x^2)).

The same endpoints reproduce the recurrence coefficients to leading order:
the band center (a+b)/2 approximates alpha_n and the squared quarter-width
((b-a)/4)^2 approximates beta_n; ``fluid_recurrence`` returns this pair in
closed form.

A variant endpoint formula with denominator (2n+s+2)^2 is exposed as
``support_endpoints_shifted``; it deviates from the field conditions by
O(1/n) but tracks the finite-n zero distribution slightly differently and is
kept for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .errors import DomainError
from .precision import GUARD_DIGITS, BigReal, Precision, to_mpf
from .jacobi import JacobiParams


@dataclass(frozen=True)
class SupportInterval:
    """Band [a_n, b_n] carrying the continuum density for size n.

    Always -1 <= a_n < b_n <= 1; an endpoint sits exactly at +/-1 only when
    the corresponding exponent vanishes.
    """

    a_n: object
    b_n: object
    n: int
    jp: JacobiParams

    def __post_init__(self):
        if not (-1 <= self.a_n < self.b_n <= 1):
            raise DomainError(
                f"invalid band [{mpmath.nstr(self.a_n, 8)}, {mpmath.nstr(self.b_n, 8)}]")

    @property
    def center(self) -> BigReal:
        return (self.a_n + self.b_n) / 2

    @property
    def halfwidth(self) -> BigReal:
        return (self.b_n - self.a_n) / 2


def v_prime(x, jp: JacobiParams) -> BigReal:
    """Derivative of the external potential, alpha/(1-x) - beta/(1+x)."""
    x = to_mpf(x)
    if not -1 < x < 1:
        raise DomainError(f"potential derivative defined on (-1,1), got {mpmath.nstr(x, 8)}")
    a, b = jp.ab_mpf()
    return a / (1 - x) - b / (1 + x)


def _endpoints_with_denominator(n: int, jp: JacobiParams, bump: int):
    a, b = jp.ab_mpf()
    s = a + b
    root = 4 * mpmath.sqrt(n * (n + a) * (n + b) * (n + s))
    den = (2 * n + s + bump) ** 2
    lo = (b * b - a * a - root) / den
    hi = (b * b - a * a + root) / den
    return lo, hi


def support_endpoints(n: int, jp: JacobiParams) -> SupportInterval:
    """Band endpoints satisfying the field conditions exactly.

    b_n = 1 exactly when alpha = 0 and a_n = -1 exactly when beta = 0; the
    closed form lands within an ulp of those values, so they are snapped.
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    lo, hi = _endpoints_with_denominator(n, jp, 0)
    a, b = jp.ab_mpf()
    eps = mpf(10) ** (4 - mp.dps)
    if a == 0 and abs(hi - 1) < eps:
        hi = mpf(1)
    if b == 0 and abs(lo + 1) < eps:
        lo = mpf(-1)
    return SupportInterval(lo, hi, n, jp)


def support_endpoints_shifted(n: int, jp: JacobiParams) -> SupportInterval:
    """Variant endpoints with denominator (2n+s+2)^2.

    These do not satisfy the field conditions exactly (the residual is
    O(1/n)); they arise from attaching the band to size n+1 data and are
    exposed for cross-checking scaling behaviour.
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    lo, hi = _endpoints_with_denominator(n, jp, 2)
    return SupportInterval(lo, hi, n, jp)


def equilibrium_density(x, si: SupportInterval) -> BigReal:
    """Continuum density sigma(x) on the band; zero at the endpoints.

    sigma(x) = (n + s/2) sqrt((b-x)(x-a)) / (pi (1-x^2)); its integral over
    [a_n, b_n] is exactly n.
    """
    x = to_mpf(x)
    if not si.a_n <= x <= si.b_n:
        raise DomainError(
            f"density supported on [{mpmath.nstr(si.a_n, 8)}, {mpmath.nstr(si.b_n, 8)}], "
            f"got {mpmath.nstr(x, 8)}")
    if x == si.a_n or x == si.b_n:
        return mpf(0)
    a, b = si.jp.ab_mpf()
    s = a + b
    return ((si.n + s / 2) * mpmath.sqrt((si.b_n - x) * (x - si.a_n))
            / (mpmath.pi * (1 - x * x)))


def band_kernel(si: SupportInterval, t) -> tuple:
    """Point x = center + halfwidth sin(t) and (b-x)(x-a)/(1-x^2) without cancellation.

    Rewrites 1 -/+ x as (1 -/+ endpoint) + halfwidth (1 -/+ sin t), sums of
    nonnegative terms, so the ratio stays evaluable when quadrature nodes
    land on an endpoint that coincides with +-1 (exponent zero); there the
    vanishing factors cancel exactly.
    """
    r = si.halfwidth
    st = mpmath.sin(t)
    up = r * (1 - st)
    dn = r * (1 + st)
    x = si.center + r * st
    right = mpf(1) if si.b_n == 1 else up / ((1 - si.b_n) + up)
    left = mpf(1) if si.a_n == -1 else dn / ((1 + si.a_n) + dn)
    return x, right * left


@dataclass(frozen=True)
class EquilibriumDensity:
    """Callable wrapper around ``equilibrium_density`` for a fixed band."""

    si: SupportInterval

    def __call__(self, x) -> BigReal:
        return equilibrium_density(x, self.si)

    def mass(self, p: Precision) -> BigReal:
        """Integral of the density over its band (equals the size n)."""
        with p.workdps():
            # substitution x = center + halfwidth * sin(t) removes the
            # square-root endpoint singularities of the integrand's derivative
            a, b = self.si.jp.ab_mpf()
            s = a + b

            def g(t):
                return (self.si.n + s / 2) * band_kernel(self.si, t)[1] / mpmath.pi

            return mpmath.quad(g, [-mpmath.pi / 2, mpmath.pi / 2])


def fluid_recurrence(n: int, jp: JacobiParams):
    """Continuum estimates (band center, squared quarter-width) for the recurrence pair.

    Closed forms with the exact-field endpoints:

        center        = (beta^2 - alpha^2) / (2n+s)^2
        quarter-width = 4 n (n+alpha) (n+beta) (n+s) / (2n+s)^4

    At alpha = beta = 0 these are 0 and 1/4 for every n. They approach the
    true alpha_n, beta_n with O(1/n) relative error.
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    a, b = jp.ab_mpf()
    s = a + b
    den = (2 * n + s) ** 2
    alpha_tilde = (b * b - a * a) / den
    beta_tilde = 4 * n * (n + a) * (n + b) * (n + s) / (den * den)
    return alpha_tilde, beta_tilde
