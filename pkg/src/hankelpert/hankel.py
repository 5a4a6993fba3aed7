"""Direct computation of Hankel log-determinants from moments.

Three independent routes are implemented:

* ``hankel_logdet_ldl``        symmetric triangular (LDL) factorization of the
                               moment matrix; ln det = sum of ln pivots;
* ``hankel_logdet_recurrence`` recurrence coefficients of the (possibly
                               perturbed) weight recovered from modified
                               moments by the Chebyshev-style moment map,
                               then ln det = sum over j < n of (n-j) ln beta_j;
* ``hankel_logdet_rational``   exact fraction-free (Bareiss) elimination over
                               the rationals, available for integer weight
                               exponents and polynomial perturbations.

Hankel matrices of smooth positive weights are notoriously ill-conditioned:
the pivots decay geometrically (like 4^-j here), so a linear-in-n digit
budget is required. ``auto_digits`` implements the policy
max(64, ceil(1.4 n) + 32), and the internal arithmetic adds a further
0.7 n conditioning guard so results still honour the 8-guard-digit contract
of the requested precision. Breakdown (a nonpositive pivot or recurrence
coefficient) raises PrecisionError with the failing index; it is detected,
never masked.

The module also evaluates, for n <= 3, the multidimensional-integral form of
the determinant ratio

    D_n[w h] / D_n[w] = < prod_j h(x_j) >,

the average taken over the n-point ensemble with joint density proportional
to prod_{j<k} (x_k - x_j)^2 prod_j w(x_j); this is the classical identity
expressing a Hankel determinant as an n-fold integral, and serves as an
independent oracle for the moment-based routes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, PrecisionError
from .jacobi import (JacobiParams, RecurrenceCoeffs, jacobi_alpha_n,
                     jacobi_alpha_n_exact, jacobi_beta_n, jacobi_beta_n_exact,
                     jacobi_moment, jacobi_moment_exact)
from .precision import GUARD_DIGITS, BigReal, Precision, ensure_finite, to_mpf
from .quadrature import gauss_jacobi_rule

#: Extra decimal digits per matrix row consumed by pivot decay during factorization.
CONDITIONING_GUARD_PER_ROW = 0.7


def auto_digits(n: int) -> int:
    """Default precision policy for determinants of size n: max(64, ceil(1.4 n) + 32)."""
    return max(64, math.ceil(1.4 * n) + 32)


def auto_precision(n: int) -> Precision:
    return Precision(auto_digits(n))


def _conditioning_guard(n: int) -> int:
    return GUARD_DIGITS + math.ceil(CONDITIONING_GUARD_PER_ROW * n)


def cross_validation_tol(n: int, p: Precision) -> BigReal:
    """Absolute agreement bound between the ldl and recurrence routes: n * 10^(16-digits)."""
    return n * mpf(10) ** (2 * GUARD_DIGITS - p.decimal_digits)


@dataclass(frozen=True)
class MomentSequence:
    """Moments mu_0..mu_{2n-2} of a weight, with provenance.

    ``source`` is "pure" for the bare weight or "perturbed(<expr>)" for a
    multiplicative perturbation. When available, ``modified`` carries the
    moments against the monic orthogonal basis of the unperturbed weight
    ``basis`` (one extra entry, indices 0..2n-1); these are well conditioned
    for the recurrence route, unlike the raw power moments.
    """

    mu: tuple
    source: str
    modified: tuple = None
    basis: JacobiParams = None

    def __post_init__(self):
        if len(self.mu) == 0 or not self.mu[0] > 0:
            raise DomainError("moment sequence must start with mu_0 > 0")

    def max_order(self) -> int:
        """Largest matrix size n this sequence covers (needs indices up to 2n-2)."""
        return (len(self.mu) + 1) // 2


@dataclass(frozen=True)
class HankelResult:
    """Log-determinant of one n x n Hankel matrix, with method and precision used.

    ``cross_tolerance`` is the absolute bound within which the ldl and
    recurrence routes must agree at this size and precision; ``min_pivot``
    (ldl route only) is the smallest pivot seen, a direct conditioning probe.
    """

    n: int
    log_det: object
    method: str
    precision_used: Precision
    cross_tolerance: object = None
    min_pivot: object = None


def pure_moment_sequence(jp: JacobiParams, n: int, p: Precision) -> MomentSequence:
    """Moments of the unperturbed weight, for determinants up to size n.

    The modified moments against the weight's own orthogonal basis are
    (h_0, 0, 0, ...) by orthogonality, so they are attached analytically.
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    with p.workdps(_conditioning_guard(n)):
        boosted = Precision(max(32, mp.dps))
        mus = tuple(jacobi_moment(k, jp, boosted) for k in range(2 * n - 1))
        modified = (mus[0],) + tuple(mpf(0) for _ in range(2 * n - 1))
    return MomentSequence(mus, "pure", modified, jp)


def perturbed_moment_sequence(jp: JacobiParams, h, n: int, p: Precision,
                              m: int = None) -> MomentSequence:
    """Moments of the perturbed weight w*h by one order-m Gauss rule (default m = n+32).

    One pass over the nodes yields both the raw power moments mu_0..mu_{2n-2}
    and the modified moments nu_0..nu_{2n-1} against the monic orthogonal
    basis of the unperturbed weight, evaluated by its three-term recurrence.
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    if m is None:
        m = n + 32
    if m < n:
        raise DomainError(f"rule order {m} cannot resolve moments for size {n}")
    with p.workdps(_conditioning_guard(n)):
        boosted = Precision(max(32, mp.dps))
        rule = gauss_jacobi_rule(m, jp, boosted)
        count = 2 * n - 1
        ca = [jacobi_alpha_n(k, jp) for k in range(count)]
        cb = [mpf(0)] + [jacobi_beta_n(k, jp) for k in range(1, count)]
        mus = [mpf(0)] * count
        nus = [mpf(0)] * (count + 1)
        for x, w in zip(rule.nodes, rule.weights):
            wh = w * h(x)
            xp = wh
            for k in range(count):
                mus[k] += xp
                xp *= x
            pkm1, pk = mpf(0), mpf(1)
            nus[0] += wh
            for k in range(count):
                pkp1 = (x - ca[k]) * pk - cb[k] * pkm1
                pkm1, pk = pk, pkp1
                nus[k + 1] += wh * pkp1
        for k, v in enumerate(mus):
            ensure_finite(v, f"mu_{k}")
    label = getattr(h, "source", None) or getattr(h, "__name__", "h")
    return MomentSequence(tuple(mus), f"perturbed({label})", tuple(nus), jp)


def hankel_logdet_ldl(ms: MomentSequence, n: int, p: Precision) -> HankelResult:
    """ln det of the n x n Hankel matrix (mu_{j+k}) by symmetric LDL factorization.

    The matrix is positive definite for any positive weight; a nonpositive
    pivot therefore identifies precision exhaustion (or an invalid weight)
    and raises with the failing index.
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    if ms.max_order() < n:
        raise DomainError(f"moment sequence covers size {ms.max_order()}, need {n}")
    with p.workdps(_conditioning_guard(n)):
        A = [[ms.mu[j + k] for k in range(n)] for j in range(n)]
        log_det = mpf(0)
        min_pivot = None
        for i in range(n):
            piv = A[i][i]
            if not piv > 0:
                raise PrecisionError(
                    f"matrix not positive definite at requested precision: "
                    f"pivot {i} = {mpmath.nstr(piv, 6)} at {p.decimal_digits} digits")
            if min_pivot is None or piv < min_pivot:
                min_pivot = piv
            log_det += mpmath.log(piv)
            row_i = A[i]
            for j in range(i + 1, n):
                factor = A[j][i] / piv
                row_j = A[j]
                for k in range(j, n):
                    row_j[k] -= factor * row_i[k]
                # symmetry: only the upper triangle of each Schur complement
                # is updated, the lower is mirrored on read
                for k in range(i + 1, j):
                    row_j[k] = A[k][j]
        ensure_finite(log_det, f"ln det (size {n})")
    return HankelResult(n, log_det, "ldl", p, cross_validation_tol(n, p), min_pivot)


def modified_chebyshev(nu, aux_alpha, aux_beta, count: int):
    """Recurrence coefficients from moments against an auxiliary orthogonal basis.

    ``nu[l]`` are the modified moments of the target weight against monic
    auxiliary polynomials with recurrence coefficients ``aux_alpha[l]``,
    ``aux_beta[l]`` (aux_beta[0] unused); 2*count moment entries produce
    ``count`` coefficient pairs (alpha_k, beta_k), beta_0 = nu_0.

    The arithmetic is generic: mpf inputs run at the current working
    precision, Fractions (with Fraction auxiliaries, e.g. all zeros for the
    raw-moment map) run exactly.
    """
    if len(nu) < 2 * count:
        raise DomainError(f"need {2 * count} modified moments, got {len(nu)}")
    zero = nu[0] * 0
    sig_prev = [zero] * (2 * count)
    sig = list(nu)
    alphas = [aux_alpha[0] + nu[1] / nu[0]]
    betas = [nu[0]]
    for k in range(1, count):
        fresh = [zero] * (2 * count)
        for l in range(k, 2 * count - k):
            fresh[l] = (sig[l + 1] - (alphas[k - 1] - aux_alpha[l]) * sig[l]
                        - betas[k - 1] * sig_prev[l] + aux_beta[l] * sig[l - 1])
        if fresh[k] == 0 or sig[k - 1] == 0:
            raise PrecisionError(f"moment map breakdown at step {k}: zero denominator")
        alphas.append(aux_alpha[k] + fresh[k + 1] / fresh[k] - sig[k] / sig[k - 1])
        betas.append(fresh[k] / sig[k - 1])
        sig_prev, sig = sig, fresh
    return alphas, betas


def _modified_from_raw(ms: MomentSequence, jp: JacobiParams, count: int):
    """Modified moments nu_0..nu_{count-1} from raw moments by exact basis change.

    Expands each monic auxiliary polynomial in powers of x and contracts with
    the raw moments. Mathematically exact; numerically it reintroduces the
    cancellation the modified moments exist to avoid, so it is only a
    fallback for sequences built without them (adequate under the linear
    digit budget of auto_digits).
    """
    ca = [jacobi_alpha_n(k, jp) for k in range(count)]
    cb = [mpf(0)] + [jacobi_beta_n(k, jp) for k in range(1, count)]
    prev = []
    cur = [mpf(1)]
    nus = []
    for k in range(count):
        if k > 0:
            shifted = [mpf(0)] + cur
            nxt = [mpf(0)] * (k + 1)
            for i, c in enumerate(shifted):
                nxt[i] += c
            for i, c in enumerate(cur):
                nxt[i] -= ca[k - 1] * c
            for i, c in enumerate(prev):
                nxt[i] -= cb[k - 1] * c
            prev, cur = cur, nxt
        if len(cur) > len(ms.mu):
            raise DomainError("raw moment sequence too short for basis change")
        nus.append(mpmath.fsum(c * ms.mu[i] for i, c in enumerate(cur)))
    return nus


def perturbed_recurrence_coeffs(ms: MomentSequence, n: int, jp: JacobiParams,
                                p: Precision) -> RecurrenceCoeffs:
    """Recurrence coefficients alpha_0..alpha_{n-1}, beta_1..beta_{n-1} of the weight behind ``ms``."""
    with p.workdps(_conditioning_guard(n)):
        if ms.modified is not None and ms.basis == jp and len(ms.modified) >= 2 * n:
            nus = list(ms.modified[:2 * n])
        else:
            nus = _modified_from_raw(ms, jp, 2 * n)
        aux_a = [jacobi_alpha_n(k, jp) for k in range(2 * n)]
        aux_b = [mpf(0)] + [jacobi_beta_n(k, jp) for k in range(1, 2 * n)]
        alphas, betas = modified_chebyshev(nus, aux_a, aux_b, n)
        for k in range(1, n):
            if not betas[k] > 0:
                raise PrecisionError(
                    f"recurrence breakdown: beta_{k} = {mpmath.nstr(betas[k], 6)} "
                    f"at {p.decimal_digits} digits")
    return RecurrenceCoeffs(tuple(alphas), tuple(betas[1:]))


def hankel_logdet_recurrence(ms: MomentSequence, n: int, jp: JacobiParams,
                             p: Precision) -> HankelResult:
    """ln det via the norm product: ln D_n = sum_{j<n} (n-j) ln beta_j, beta_0 = mu_0.

    The recurrence coefficients come from the modified-moment map against the
    unperturbed orthogonal basis ``jp``, which keeps the map well conditioned
    for smooth perturbations.
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    if ms.max_order() < n:
        raise DomainError(f"moment sequence covers size {ms.max_order()}, need {n}")
    with p.workdps(_conditioning_guard(n)):
        rc = perturbed_recurrence_coeffs(ms, n, jp, p)
        betas = (ms.mu[0],) + rc.beta_seq
        log_det = mpmath.fsum((n - j) * mpmath.log(b) for j, b in enumerate(betas[:n]))
        ensure_finite(log_det, f"ln det (size {n})")
    return HankelResult(n, log_det, "recurrence", p, cross_validation_tol(n, p))


def _bareiss_leading_minors(rows):
    """Exact leading principal minors det_1..det_n of a rational matrix.

    Clears denominators to integers, runs fraction-free (Bareiss) elimination
    whose pivots are exactly the leading minors of the scaled matrix, then
    undoes the scaling.
    """
    n = len(rows)
    scale = 1
    for row in rows:
        for v in row:
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
    A = [[int(v * scale) for v in row] for row in rows]
    minors = []
    prev = 1
    for i in range(n):
        if i > 0 and A[i - 1][i - 1] == 0:
            raise PrecisionError(f"exact elimination hit a zero leading minor at {i}")
        if i < n - 1:
            piv = A[i][i]
            for j in range(i + 1, n):
                for k in range(i + 1, n):
                    A[j][k] = (A[j][k] * piv - A[j][i] * A[i][k]) // prev
                A[j][i] = 0
            prev = piv
        minors.append(Fraction(A[i][i], scale ** (i + 1)))
    return minors


def rational_hankel_minors(jp: JacobiParams, n: int, h_coeffs=None):
    """Exact Hankel determinants D_1..D_n over the rationals.

    Requires nonnegative integer weight exponents; ``h_coeffs`` are optional
    rational polynomial coefficients (constant first) of a perturbation, whose
    moments reduce to shifted moments of the bare weight.
    """
    if n < 1:
        raise DomainError(f"size must be >= 1, got {n}")
    extra = 0 if h_coeffs is None else len(h_coeffs) - 1
    base = [jacobi_moment_exact(k, jp) for k in range(2 * n - 1 + extra)]
    if h_coeffs is None:
        mus = base
    else:
        coeffs = [Fraction(c) for c in h_coeffs]
        mus = [sum(c * base[k + i] for i, c in enumerate(coeffs))
               for k in range(2 * n - 1)]
    H = [[mus[j + k] for k in range(n)] for j in range(n)]
    return _bareiss_leading_minors(H)


def hankel_logdet_rational(jp: JacobiParams, n: int, p: Precision,
                           h_coeffs=None) -> HankelResult:
    """ln det from the exact rational determinant (bit-exact ground truth route)."""
    det = rational_hankel_minors(jp, n, h_coeffs)[-1]
    if det <= 0:
        raise PrecisionError(f"exact determinant of size {n} is not positive: {det}")
    with p.workdps(2 * GUARD_DIGITS):
        log_det = mpmath.log(mpf(det.numerator)) - mpmath.log(mpf(det.denominator))
    return HankelResult(n, log_det, "rational", p)


def heine_average_small_n(n: int, jp: JacobiParams, h, p: Precision) -> BigReal:
    """Determinant ratio D_n[w h]/D_n[w] as an n-fold ensemble average, n <= 3.

    Evaluates both n-fold integrals (with and without prod_j h(x_j)) against
    the squared Vandermonde density by tensor-product Gauss quadrature and
    returns their ratio. Cost grows like (rule order)^n, hence the size cap.
    """
    if n not in (1, 2, 3):
        raise DomainError(f"ensemble average implemented for n in 1..3, got {n}")
    order = max(24, p.decimal_digits + GUARD_DIGITS)
    with p.workdps(2 * GUARD_DIGITS):
        rule = gauss_jacobi_rule(order, jp, Precision(max(32, mp.dps)))
        xs = rule.nodes
        ws = rule.weights
        hx = [h(x) for x in xs]
        q = len(xs)
        if n == 1:
            num = mpmath.fsum(w * hv for w, hv in zip(ws, hx))
            den = mpmath.fsum(ws)
            return ensure_finite(num / den, "ensemble average")
        # pairwise squared differences, shared by both integrals
        d2 = [[(xs[i] - xs[j]) ** 2 for j in range(q)] for i in range(q)]
        num = mpf(0)
        den = mpf(0)
        if n == 2:
            for i in range(q):
                for j in range(i + 1, q):
                    v = ws[i] * ws[j] * d2[i][j]
                    num += v * hx[i] * hx[j]
                    den += v
        else:
            for i in range(q):
                for j in range(i + 1, q):
                    wij = ws[i] * ws[j] * d2[i][j]
                    hij = hx[i] * hx[j]
                    for k in range(j + 1, q):
                        v = wij * ws[k] * d2[i][k] * d2[j][k]
                        num += v * hij * hx[k]
                        den += v
        # ordered-index sums omit the same n! factor from both integrals
        return ensure_finite(num / den, "ensemble average")
