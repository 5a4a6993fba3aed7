"""Large-n asymptotics of the perturbed determinant via linear statistics.

A multiplicative perturbation h changes the log-determinant by the cumulant
expansion of the linear statistic sum_j ln h(x_j) over the n-point ensemble:
its mean contributes at orders n and 1, its variance contributes half of
itself at order 1, and higher cumulants vanish as n grows. With the
Chebyshev data c_k of ln h(cos t) = c_0/2 + sum c_k cos(k t), and
s = alpha + beta:

    mean          -> (n + s/2) c_0/2 - (alpha/2) ln h(1) - (beta/2) ln h(-1)
    variance / 2  ->  (1/8) sum_{k>=1} k c_k^2

so the full prediction for ln D_n(h) splits into

    log_leading   = -n(n+s) ln 2 + ((alpha^2+beta^2)/2 - 1/4) ln n + n ln 2pi
    log_mean      =  n c_0/2
    boundary_part = (s/2) c_0/2
    edge_part     = -(alpha/2) ln h(1) - (beta/2) ln h(-1)
    pv_part       = (1/8) sum_{k>=1} k c_k^2
    pure_constant = the h-independent constant of the bare weight.

The variance half, ``pv_part``, equals the principal-value double integral

    (1/4 pi^2) PV int int  ln h(x) (d/dy ln h(y)) sqrt(1-y^2)
                           / (sqrt(1-x^2) (x - y))  dy dx,

evaluated here either from the coefficient sum (closed) or by pairing the
expansion with its finite Hilbert transform under Chebyshev-Gauss quadrature
(an independent discretization, used for cross-checking). edge_part vanishes
when h(+-1) = 1 and cancels between symmetric data; dropping it leaves an
O(1) error in the constant whenever an exponent and the matching boundary
value of ln h are both nonzero.

Validity requires alpha >= -1/2 and beta >= -1/2; outside that region the
n-exponent of the leading term is no longer correct and assembly refuses
with ValidityError.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, ValidityError
from .fluid import band_kernel, support_endpoints
from .jacobi import JacobiParams, jacobi_asym_constant
from .precision import GUARD_DIGITS, BigReal, Precision, ensure_finite, to_mpf
from .quadrature import ChebExpansion, cheb_expand, cheb_expand_auto


def cheb_log_expand(h, p: Precision, M: int = None) -> ChebExpansion:
    """Chebyshev expansion of x -> ln h(x); degree auto-selected unless given.

    h must be strictly positive on [-1, 1]; a nonpositive sample aborts the
    expansion rather than poisoning it with complex logarithms.
    """
    def log_h(x):
        v = h(x)
        if not v > 0:
            raise DomainError(
                f"perturbation is not positive at x = {mpmath.nstr(x, 8)}: "
                f"h(x) = {mpmath.nstr(v, 6)}")
        return mpmath.log(v)

    if M is None:
        return cheb_expand_auto(log_h, p)
    return cheb_expand(log_h, M, p)


def hilbert_transform_cheb(ce: ChebExpansion) -> ChebExpansion:
    """Finite Hilbert transform of the derivative, against the kernel 1/(x - y).

    For f with Chebyshev data c_k, the principal-value integral

        H(x) = PV int_{-1}^{1} f'(y) sqrt(1 - y^2) / (x - y) dy

    is again a Chebyshev series with coefficients pi k c_k (constant term 0):
    differentiation maps the degree-k term to k U_{k-1}, and the transform
    sends sqrt(1-y^2) U_{k-1}(y) to pi T_k(x).
    """
    out = [mpf(0)]
    for k in range(1, len(ce.coeffs)):
        out.append(mpmath.pi * k * ce.coeffs[k])
    if len(out) == 1:
        out.append(mpf(0))
    tail = max(abs(out[-1]), abs(out[-2]))
    return ChebExpansion(tuple(out), tail)


def pv_double_integral(ce: ChebExpansion, method: str = "closed") -> BigReal:
    """The double principal-value functional of ln h, i.e. half its fluctuation variance.

    ``closed`` sums (1/8) k c_k^2 directly. ``quadrature`` re-derives the
    value by integrating ce against its Hilbert transform with a
    Chebyshev-Gauss rule and dividing by 4 pi^2; the two must agree to the
    expansion's truncation error.
    """
    if method == "closed":
        return ensure_finite(
            mpmath.fsum(k * c * c for k, c in enumerate(ce.coeffs) if k >= 1) / 8,
            "pv part")
    if method == "quadrature":
        ht = hilbert_transform_cheb(ce)
        M = ce.degree + 16
        total = mpf(0)
        for j in range(1, M + 1):
            x = mpmath.cos((2 * j - 1) * mpmath.pi / (2 * M))
            total += ce(x) * ht(x)
        return ensure_finite(total * mpmath.pi / M / (4 * mpmath.pi ** 2), "pv part")
    raise DomainError(f"unknown method {method!r}, expected 'closed' or 'quadrature'")


def mean_term(ce: ChebExpansion, n: int, jp: JacobiParams, form: str = "limit") -> BigReal:
    """Mean of the linear statistic sum_j ln h(x_j) at size n.

    ``limit`` uses the large-n coefficient (n + s/2) c_0/2 (plus nothing:
    the edge correction is accounted separately in assembly). ``finite``
    integrates ce against the size-n continuum density on its band, which
    already contains the edge effect up to o(1).
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    a, b = jp.ab_mpf()
    s = a + b
    if form == "limit":
        return (n + s / 2) * ce.coeffs[0] / 2
    if form == "finite":
        si = support_endpoints(n, jp)

        def g(t):
            x, kernel = band_kernel(si, t)
            return (n + s / 2) * kernel * ce(x) / mpmath.pi

        return ensure_finite(
            mpmath.quad(g, [-mpmath.pi / 2, mpmath.pi / 2]), "mean term")
    raise DomainError(f"unknown form {form!r}, expected 'limit' or 'finite'")


@dataclass(frozen=True)
class LinStatTerms:
    """Mean and variance of sum_j ln h(x_j) at size n, in the chosen form."""

    mean: object
    variance: object
    n: int
    form: str


def linstat_terms(h, n: int, jp: JacobiParams, p: Precision,
                  form: str = "limit") -> LinStatTerms:
    """Cumulant data of the log-perturbation statistic.

    The limit variance is sum k c_k^2 / 4 with the global Chebyshev data of
    ln h; the finite form re-expands ln h over the size-n band (t -> center +
    halfwidth * t) and applies the same formula there.
    """
    with p.workdps():
        ce = cheb_log_expand(h, p)
        mean = mean_term(ce, n, jp, form)
        if form == "limit":
            cv = ce
        elif form == "finite":
            si = support_endpoints(n, jp)
            cv = cheb_log_expand(lambda t: h(si.center + si.halfwidth * t), p)
        else:
            raise DomainError(f"unknown form {form!r}, expected 'limit' or 'finite'")
        variance = mpmath.fsum(
            k * c * c for k, c in enumerate(cv.coeffs) if k >= 1) / 4
    return LinStatTerms(mean, variance, n, form)


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Additive decomposition of the predicted ln D_n for a perturbed weight.

    ``total`` re-assembles the prediction; ``log_constant`` collects the
    n-independent part (everything except log_leading and log_mean).
    """

    n: int
    log_leading: object
    log_mean: object
    pv_part: object
    boundary_part: object
    edge_part: object
    pure_constant_part: object
    precision: Precision

    @property
    def log_constant(self) -> BigReal:
        return (self.pv_part + self.boundary_part + self.edge_part
                + self.pure_constant_part)

    @property
    def total(self) -> BigReal:
        return self.log_leading + self.log_mean + self.log_constant


def assemble_prediction(n: int, jp: JacobiParams, h, p: Precision,
                        cheb_m: int = None) -> AsymptoticPrediction:
    """Predicted ln D_n for the perturbed weight, split into named parts.

    Parts, with m = c_0/2 the mean of ln h against the arcsine density:

        log_leading   = -n(n+s) ln 2 + ((alpha^2+beta^2)/2 - 1/4) ln n + n ln 2pi
        log_mean      = n m
        boundary_part = (s/2) m
        edge_part     = -(alpha/2) ln h(1) - (beta/2) ln h(-1)
        pv_part       = (1/8) sum k c_k^2
        pure_constant = h-independent constant of the bare weight

    The boundary values h(+-1) are taken from h directly, not from the
    expansion, so edge_part carries no truncation error. Residual error of
    ``total`` against the computed ln D_n is O(1/n) in general and O(1/n^2)
    for symmetric data (alpha = beta with even h).
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    if not jp.asymptotic_valid:
        raise ValidityError(
            f"asymptotic requires alpha, beta >= -1/2, got "
            f"alpha = {jp.alpha}, beta = {jp.beta}")
    with p.workdps():
        a, b = jp.ab_mpf()
        s = a + b
        ce = cheb_log_expand(h, p, cheb_m)
        m = ce.coeffs[0] / 2
        log_leading = (-n * (n + s) * mpmath.log(2)
                       + ((a * a + b * b) / 2 - mpf(1) / 4) * mpmath.log(n)
                       + n * mpmath.log(2 * mpmath.pi))
        log_mean = n * m
        boundary = s / 2 * m
        h_right = to_mpf(h(mpf(1)))
        h_left = to_mpf(h(mpf(-1)))
        if not (h_right > 0 and h_left > 0):
            raise DomainError("perturbation must be positive at the endpoints")
        edge = -(a / 2) * mpmath.log(h_right) - (b / 2) * mpmath.log(h_left)
        pv = pv_double_integral(ce)
        pure = jacobi_asym_constant(jp, p)
        for name, v in (("leading", log_leading), ("mean", log_mean),
                        ("boundary", boundary), ("edge", edge), ("pv", pv),
                        ("constant", pure)):
            ensure_finite(v, f"{name} part")
    return AsymptoticPrediction(n, log_leading, log_mean, pv, boundary, edge, pure, p)
