"""Working-precision plumbing: the precision contract and exact conversions.

Arbitrary-precision reals are ``mpmath.mpf`` values (aliased ``BigReal``).
Every operation that accepts a :class:`Precision` computes internally with
guard digits and returns a value whose relative error stays far below the
contract bound ``10**(8 - decimal_digits)``, i.e. callers may lose up to
eight digits to downstream arithmetic and still meet their own targets.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, PrecisionError

BigReal = mpmath.mpf

#: Guard digits added on top of the requested precision inside every operation.
GUARD_DIGITS = 8


@dataclass(frozen=True)
class Precision:
    """Requested working precision, in decimal digits (at least 32)."""

    decimal_digits: int

    def __post_init__(self):
        if not isinstance(self.decimal_digits, numbers.Integral):
            raise DomainError("decimal_digits must be an integer")
        if self.decimal_digits < 32:
            raise DomainError(
                f"decimal_digits must be >= 32, got {self.decimal_digits}")

    def workdps(self, extra: int = GUARD_DIGITS):
        """Context manager setting mpmath working precision with guard digits."""
        return mp.workdps(self.decimal_digits + extra)

    @property
    def rel_tolerance(self) -> BigReal:
        """The contract bound 10**(8 - decimal_digits) on relative error."""
        return mpf(10) ** (GUARD_DIGITS - self.decimal_digits)


def to_mpf(value) -> BigReal:
    """Convert ``value`` to mpf at the current working precision.

    Fractions and rational strings are converted by one correctly rounded
    division so no decimal-representation error sneaks in. Plain floats are
    exact binary values already and pass through unchanged.
    """
    if isinstance(value, mpf):
        return value
    if isinstance(value, Fraction):
        return mpf(value.numerator) / mpf(value.denominator)
    if isinstance(value, numbers.Integral):
        return mpf(int(value))
    if isinstance(value, float):
        return mpf(value)
    if isinstance(value, str):
        try:
            return to_mpf(Fraction(value))
        except (ValueError, ZeroDivisionError):
            return mpf(value)
    raise DomainError(f"cannot convert {type(value).__name__} to mpf")


def exact_fraction(value) -> Fraction | None:
    """Exact rational form of ``value``, or None when there is none.

    Ints, Fractions, floats (binary rationals) and decimal/ratio strings all
    have one; mpf values are deliberately not treated as exact because they
    normally arrive as rounded computation results.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            return None
    return None


def ensure_finite(value: BigReal, what: str = "result") -> BigReal:
    """Raise PrecisionError if ``value`` is NaN or infinite; otherwise return it."""
    if not mpmath.isfinite(value):
        raise PrecisionError(f"{what} is not finite: {value}")
    return value
