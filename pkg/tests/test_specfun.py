"""Log-Gamma, log-Barnes-G, the constant K, and the large-argument expansion."""
from fractions import Fraction

import mpmath
import pytest

from hankelpert.errors import DomainError
from hankelpert.precision import Precision
from hankelpert.specfun import (constant_K, log_barnes_g, log_barnes_g_asym,
                                log_gamma)

P64 = Precision(64)
P80 = Precision(80)

# ln K to 62 digits, frozen from an independent evaluation of zeta'(-1)
LOG_K_62 = "-0.16542114370045092921391966024278064276403638033520178366652231"


def test_log_gamma_anchor_values():
    # Gamma(1) = Gamma(2) = 1, Gamma(1/2) = sqrt(pi)
    assert float(abs(log_gamma(1, P64))) < 1e-60
    assert float(abs(log_gamma(2, P64))) < 1e-60
    with mpmath.workdps(70):
        want = mpmath.log(mpmath.pi) / 2
        assert float(abs(log_gamma(Fraction(1, 2), P64) - want)) < 1e-58


def test_log_gamma_duplication():
    """ln Gamma(2z) = (2z-1) ln 2 - ln(pi)/2 + ln Gamma(z) + ln Gamma(z + 1/2)."""
    with mpmath.workdps(80):
        ln2 = mpmath.log(2)
        lnpi = mpmath.log(mpmath.pi)
        for zs in ("0.25", "1.75", "7.5", "19.25"):
            z = mpmath.mpf(zs)
            lhs = log_gamma(2 * z, P64)
            rhs = ((2 * z - 1) * ln2 - lnpi / 2
                   + log_gamma(z, P64) + log_gamma(z + mpmath.mpf(1) / 2, P64))
            assert float(abs(lhs - rhs)) < 1e-55, f"z = {zs}"


def test_barnes_g_small_integers():
    # G(1)=G(2)=G(3)=1, G(4)=1!2!=2, G(5)=1!2!3!=12
    for z, want in ((1, 1), (2, 1), (3, 1), (4, 2), (5, 12)):
        with mpmath.workdps(70):
            assert float(abs(log_barnes_g(z, P64) - mpmath.log(want))) < 1e-58


def test_barnes_g_difference_equation():
    """G(z+1) = Gamma(z) G(z) in log form, on a grid covering (0, 30]."""
    with mpmath.workdps(80):
        for i in range(100):
            z = Fraction(3 * i + 1, 10)
            lhs = log_barnes_g(z + 1, P64)
            rhs = log_gamma(z, P64) + log_barnes_g(z, P64)
            assert float(abs(lhs - rhs)) < 1e-55, f"z = {z}"


def test_barnes_g_recurrence_ladder():
    """Unfolding G(z+20) down to G(z) pins the non-integer branch at z = 0.25."""
    with mpmath.workdps(90):
        z = mpmath.mpf("0.25")
        acc = log_barnes_g(z, P80)
        for j in range(20):
            acc += log_gamma(z + j, P80)
        assert float(abs(acc - log_barnes_g(z + 20, P80))) < 1e-70


def test_constant_k_frozen_and_zeta_link():
    got = constant_K(P64)
    with mpmath.workdps(70):
        frozen = mpmath.mpf(LOG_K_62)
        assert float(abs(got - frozen)) < 1e-61
        # same number as zeta'(-1), computed by a different route entirely
        zp = mpmath.zeta(-1, 1, 1)
        assert float(abs(got - zp)) < 1e-61


def test_asym_error_shrinks_like_one_over_n():
    with mpmath.workdps(80):
        for a in (0, Fraction(1, 2), 1):
            errs = []
            for n in (10, 20, 40, 80):
                direct = log_barnes_g(n + a + 1, P64)
                errs.append(abs(direct - log_barnes_g_asym(n, a, P64)))
            assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:])), f"a = {a}: {errs}"
            # first-order error for a shifted argument, second-order when a = 0
            for e1, e2 in zip(errs, errs[1:]):
                ratio = float(e1 / e2)
                assert 1.5 < ratio < 4.6, f"a = {a}: halving ratio {ratio}"


def test_asym_a_dependence_identity():
    """asym(n,a) - asym(n,0) = (a n + a^2/2) ln n - a n + (a/2) ln 2pi exactly."""
    with mpmath.workdps(70):
        n = mpmath.mpf(17)
        ln2pi = mpmath.log(2 * mpmath.pi)
        for a_s in ("0.5", "1", "2.25"):
            a = mpmath.mpf(a_s)
            lhs = log_barnes_g_asym(17, a, P64) - log_barnes_g_asym(17, 0, P64)
            rhs = (a * n + a * a / 2) * mpmath.log(n) - a * n + a / 2 * ln2pi
            assert float(abs(lhs - rhs)) < 1e-55, f"a = {a_s}"


def test_rejects_nonpositive_arguments():
    with pytest.raises(DomainError):
        log_gamma(0, P64)
    with pytest.raises(DomainError):
        log_gamma(-3, P64)
    with pytest.raises(DomainError):
        log_barnes_g(Fraction(-1, 2), P64)
    with pytest.raises(DomainError):
        log_barnes_g_asym(0, 1, P64)
