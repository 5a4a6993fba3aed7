"""Exact closed-form quantities for the unperturbed weight (1-x)^alpha (1+x)^beta.

Everything here rests on classical orthogonal-polynomial identities for the
weight w(x) = (1-x)^alpha (1+x)^beta on [-1, 1] with alpha, beta > -1:

* moments        mu_k = integral of x^k w(x) dx,
* recurrence     x P_n = P_{n+1} + alpha_n P_n + beta_n P_{n-1}  (monic P_n),
* square norms   h_n = integral of P_n(x)^2 w(x) dx,
* determinants   D_n = det(mu_{j+k})_{j,k<n} = prod_{j<n} h_j,

plus the closed form of ln D_n in terms of Gamma and Barnes-G functions and
its large-n asymptotic. Determinants underflow like 2^(-n^2), so every
product of Gammas is assembled in log space; exponentiation happens only at
the API boundary.

When both parameters are exact rationals the recurrence coefficients and
(for nonnegative integer parameters) the moments are also available as exact
``Fraction`` values; these form the bit-exact ground truth used by the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, PrecisionError, ValidityError
from .precision import (GUARD_DIGITS, BigReal, Precision, ensure_finite,
                        exact_fraction, to_mpf)
from .specfun import log_barnes_g, log_gamma


@dataclass(frozen=True)
class JacobiParams:
    """Weight exponents alpha, beta with alpha, beta > -1.

    Inputs that carry an exact rational value (ints, Fractions, floats,
    decimal or ratio strings) are normalized to ``Fraction`` so closed-form
    coefficient formulas can be evaluated exactly; anything else is kept as
    an mpf. ``asymptotic_valid`` flags the parameter region alpha >= -1/2,
    beta >= -1/2 in which the large-n determinant asymptotic holds.
    """

    alpha: object
    beta: object

    def __post_init__(self):
        for name in ("alpha", "beta"):
            raw = getattr(self, name)
            q = exact_fraction(raw)
            if q is not None:
                object.__setattr__(self, name, q)
            elif not isinstance(raw, mpf):
                raise DomainError(f"{name} must be a real number, got {raw!r}")
            v = getattr(self, name)
            if not v > -1:
                raise DomainError(f"{name} must exceed -1 for integrable moments, got {v}")

    @property
    def is_rational(self) -> bool:
        return isinstance(self.alpha, Fraction) and isinstance(self.beta, Fraction)

    @property
    def is_nonneg_integer(self) -> bool:
        return (self.is_rational
                and self.alpha.denominator == 1 and self.alpha >= 0
                and self.beta.denominator == 1 and self.beta >= 0)

    @property
    def asymptotic_valid(self) -> bool:
        half = Fraction(-1, 2)
        return self.alpha >= half and self.beta >= half

    def ab_mpf(self) -> tuple[BigReal, BigReal]:
        """(alpha, beta) as mpf at the current working precision."""
        return to_mpf(self.alpha), to_mpf(self.beta)

    def ab_exact(self) -> tuple[Fraction, Fraction]:
        if not self.is_rational:
            raise DomainError("parameters are not exact rationals")
        return self.alpha, self.beta


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Three-term recurrence coefficients of a family of monic orthogonal polynomials.

    ``alpha_seq[k]`` is the diagonal coefficient alpha_k for k = 0, 1, ...;
    ``beta_seq[k]`` is the off-diagonal coefficient beta_{k+1} (the sequence
    starts at index one in the recurrence, where every beta must be > 0).
    """

    alpha_seq: tuple
    beta_seq: tuple

    def __post_init__(self):
        for i, b in enumerate(self.beta_seq):
            if not b > 0:
                raise PrecisionError(f"recurrence coefficient beta_{i + 1} is not positive: {b}")


def jacobi_alpha_n_exact(n: int, jp: JacobiParams) -> Fraction:
    """Exact diagonal recurrence coefficient alpha_n for rational parameters."""
    a, b = jp.ab_exact()
    s = a + b
    if n == 0:
        # the generic formula is 0/0 at n=0 when alpha+beta=0; the
        # Gram-Schmidt value mu_1/mu_0 = (beta-alpha)/(alpha+beta+2)
        # extends it continuously and agrees with the formula otherwise
        return (b - a) / (s + 2)
    return (b * b - a * a) / ((2 * n + s) * (2 * n + s + 2))


def jacobi_beta_n_exact(n: int, jp: JacobiParams) -> Fraction:
    """Exact off-diagonal recurrence coefficient beta_n (n >= 1) for rational parameters."""
    if n < 1:
        raise DomainError(f"beta_n is defined for n >= 1, got {n}")
    a, b = jp.ab_exact()
    s = a + b
    if n == 1:
        # at n=1 the factors (n+s) and (2n+s-1) coincide; cancelling them
        # keeps beta_1 finite at s=-1 (both exponents -1/2)
        return 4 * (1 + a) * (1 + b) / ((s + 2) ** 2 * (s + 3))
    return (4 * n * (n + a) * (n + b) * (n + s)
            / ((2 * n + s) ** 2 * (2 * n + s + 1) * (2 * n + s - 1)))


def jacobi_alpha_n(n: int, jp: JacobiParams) -> BigReal:
    """Diagonal recurrence coefficient alpha_n at the current working precision."""
    if jp.is_rational:
        return to_mpf(jacobi_alpha_n_exact(n, jp))
    a, b = jp.ab_mpf()
    s = a + b
    if n == 0:
        return (b - a) / (s + 2)
    return (b * b - a * a) / ((2 * n + s) * (2 * n + s + 2))


def jacobi_beta_n(n: int, jp: JacobiParams) -> BigReal:
    """Off-diagonal recurrence coefficient beta_n (n >= 1), always positive."""
    if jp.is_rational:
        return to_mpf(jacobi_beta_n_exact(n, jp))
    if n < 1:
        raise DomainError(f"beta_n is defined for n >= 1, got {n}")
    a, b = jp.ab_mpf()
    s = a + b
    if n == 1:
        # same cancellation as the exact path: finite at s=-1
        return 4 * (1 + a) * (1 + b) / ((s + 2) ** 2 * (s + 3))
    return (4 * n * (n + a) * (n + b) * (n + s)
            / ((2 * n + s) ** 2 * (2 * n + s + 1) * (2 * n + s - 1)))


def jacobi_recurrence(count: int, jp: JacobiParams, p: Precision) -> RecurrenceCoeffs:
    """First ``count`` recurrence coefficients: alpha_0..alpha_{count-1}, beta_1..beta_{count-1}."""
    with p.workdps():
        alphas = tuple(jacobi_alpha_n(k, jp) for k in range(count))
        betas = tuple(jacobi_beta_n(k, jp) for k in range(1, count))
    return RecurrenceCoeffs(alphas, betas)


def jacobi_moment_exact(k: int, jp: JacobiParams) -> Fraction:
    """Exact rational moment mu_k for nonnegative integer parameters."""
    if k < 0:
        raise DomainError(f"moment order must be nonnegative, got {k}")
    if not jp.is_nonneg_integer:
        raise DomainError("exact moments require nonnegative integer parameters")
    a = int(jp.alpha)
    b = int(jp.beta)
    total = Fraction(0)
    for j in range(k + 1):
        beta_fn = Fraction(math.factorial(a + j) * math.factorial(b),
                           math.factorial(a + j + b + 1))
        total += math.comb(k, j) * Fraction(-2) ** j * beta_fn
    return Fraction(2) ** (a + b + 1) * total


def jacobi_moment(k: int, jp: JacobiParams, p: Precision) -> BigReal:
    """Moment mu_k of the weight, via the binomial expansion of (1-x)^alpha about x=1.

    The sum mu_k = 2^(alpha+beta+1) * sum_j C(k,j) (-2)^j B(alpha+j+1, beta+1)
    alternates, with terms up to ~3^k times larger than the result, so the
    working precision is raised by k*log10(3) digits internally.
    """
    if k < 0:
        raise DomainError(f"moment order must be nonnegative, got {k}")
    cancellation_guard = math.ceil(0.48 * k) + GUARD_DIGITS
    with p.workdps(GUARD_DIGITS + cancellation_guard):
        a, b = jp.ab_mpf()
        inner = Precision(max(32, mp.dps))
        ln_gamma_b1 = log_gamma(b + 1, inner)
        total = mpf(0)
        sign = 1
        pow2 = mpf(1)
        for j in range(k + 1):
            ln_beta = log_gamma(a + j + 1, inner) + ln_gamma_b1 - log_gamma(a + b + j + 2, inner)
            total += sign * mpmath.binomial(k, j) * pow2 * mpmath.exp(ln_beta)
            sign = -sign
            pow2 *= 2
        return ensure_finite(2 ** (a + b + 1) * total, f"mu_{k}")


def jacobi_log_hn(n: int, jp: JacobiParams, p: Precision) -> BigReal:
    """ln h_n, h_n the square norm of the degree-n monic orthogonal polynomial.

    h_n = 2^(2n+s+1) n! Gamma(n+a+1) Gamma(n+b+1) Gamma(n+s+1)
          / ((2n+s+1) Gamma(2n+s+1)^2),   s = a + b.
    """
    if n < 0:
        raise DomainError(f"norm index must be nonnegative, got {n}")
    with p.workdps():
        a, b = jp.ab_mpf()
        s = a + b
        inner = Precision(max(32, mp.dps))
        if n == 0:
            # h_0 = mu_0 = 2^(s+1) B(a+1, b+1); written with Gamma(s+2) so the
            # s=-1 case stays finite (the generic formula pairs Gamma(s+1)
            # with a 1/(s+1) and is 0/0 there)
            value = ((s + 1) * mpmath.log(2) + log_gamma(a + 1, inner)
                     + log_gamma(b + 1, inner) - log_gamma(s + 2, inner))
            return ensure_finite(value, "ln h_0")
        value = ((2 * n + s + 1) * mpmath.log(2)
                 + log_gamma(n + 1, inner) + log_gamma(n + a + 1, inner)
                 + log_gamma(n + b + 1, inner) + log_gamma(n + s + 1, inner)
                 - mpmath.log(2 * n + s + 1) - 2 * log_gamma(2 * n + s + 1, inner))
        return ensure_finite(value, f"ln h_{n}")


def jacobi_hn(n: int, jp: JacobiParams, p: Precision) -> BigReal:
    """Square norm h_n, computed in log space and exponentiated at the boundary."""
    with p.workdps():
        return ensure_finite(mpmath.exp(jacobi_log_hn(n, jp, p)), f"h_{n}")


def jacobi_logdet_exact(n: int, jp: JacobiParams, p: Precision) -> BigReal:
    """ln D_n of the unperturbed weight from its Gamma/Barnes-G closed form.

    D_n is the n x n Hankel determinant of the moments; the closed form is
    the product formula D_n = prod_{j<n} h_j telescoped into Barnes-G ratios:

    ln D_n = -n(n+s) ln 2 + n ln 2pi
             + ln Gamma((s+1)/2) + 2 ln G((s+1)/2) + 2 ln G(s/2+1)
             - ln G(s+1) - ln G(a+1) - ln G(b+1)
             + ln G(n+1) + ln G(n+a+1) + ln G(n+b+1) + ln G(n+s+1)
             - 2 ln G(n+(s+1)/2) - 2 ln G(n+s/2+1) - ln Gamma(n+(s+1)/2).
    """
    if n < 1:
        raise DomainError(f"determinant order must be >= 1, got {n}")
    with p.workdps(2 * GUARD_DIGITS):
        a, b = jp.ab_mpf()
        s = a + b
        inner = Precision(max(32, mp.dps))
        lg = lambda z: log_gamma(z, inner)
        lG = lambda z: log_barnes_g(z, inner)
        if s + 1 == 0:
            # ln Gamma((s+1)/2) + 2 ln G((s+1)/2) - ln G(s+1) has a removable
            # singularity at s=-1; with eps=(s+1)/2 it is
            # ln[Gamma(eps) G(eps)^2 / G(2 eps)] -> -ln 2 as eps -> 0
            head = -mpmath.log(2) + 2 * lG(s / 2 + 1)
        else:
            head = (lg((s + 1) / 2) + 2 * lG((s + 1) / 2) + 2 * lG(s / 2 + 1)
                    - lG(s + 1))
        value = (-n * (n + s) * mpmath.log(2) + n * mpmath.log(2 * mpmath.pi)
                 + head - lG(a + 1) - lG(b + 1)
                 + lG(n + 1) + lG(n + a + 1) + lG(n + b + 1) + lG(n + s + 1)
                 - 2 * lG(n + (s + 1) / 2) - 2 * lG(n + s / 2 + 1) - lg(n + (s + 1) / 2))
        return ensure_finite(value, f"ln D_{n}")


def jacobi_asym_constant(jp: JacobiParams, p: Precision) -> BigReal:
    """The n-independent constant of the large-n determinant asymptotic (log form).

    ln [ G((s+1)/2)^2 G(s/2+1)^2 Gamma((s+1)/2) / (G(s+1) G(a+1) G(b+1)) ].
    """
    with p.workdps(2 * GUARD_DIGITS):
        a, b = jp.ab_mpf()
        s = a + b
        inner = Precision(max(32, mp.dps))
        if s + 1 == 0:
            # same removable singularity as the exact form: the bracketed
            # Gamma((s+1)/2) G((s+1)/2)^2 / G(s+1) factor tends to 1/2
            value = (-mpmath.log(2) + 2 * log_barnes_g(s / 2 + 1, inner)
                     - log_barnes_g(a + 1, inner) - log_barnes_g(b + 1, inner))
            return ensure_finite(value, "asymptotic constant")
        value = (2 * log_barnes_g((s + 1) / 2, inner) + 2 * log_barnes_g(s / 2 + 1, inner)
                 + log_gamma((s + 1) / 2, inner)
                 - log_barnes_g(s + 1, inner) - log_barnes_g(a + 1, inner)
                 - log_barnes_g(b + 1, inner))
        return ensure_finite(value, "asymptotic constant")


def jacobi_logdet_asym(n: int, jp: JacobiParams, p: Precision) -> BigReal:
    """Large-n asymptotic of ln D_n for the unperturbed weight.

    ln D_n ~ -n(n+s) ln 2 + ((a^2+b^2)/2 - 1/4) ln n + n ln 2pi + constant,
    valid for alpha >= -1/2 and beta >= -1/2.
    """
    if n < 1:
        raise DomainError(f"determinant order must be >= 1, got {n}")
    if not jp.asymptotic_valid:
        raise ValidityError(
            f"asymptotic form requires alpha >= -1/2 and beta >= -1/2, "
            f"got alpha={jp.alpha}, beta={jp.beta} (outside stated validity)")
    with p.workdps(2 * GUARD_DIGITS):
        a, b = jp.ab_mpf()
        s = a + b
        value = (-n * (n + s) * mpmath.log(2)
                 + ((a * a + b * b) / 2 - mpf(1) / 4) * mpmath.log(n)
                 + n * mpmath.log(2 * mpmath.pi)
                 + jacobi_asym_constant(jp, Precision(max(32, mp.dps))))
        return ensure_finite(value, f"asymptotic ln D_{n}")
