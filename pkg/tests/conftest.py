"""Shared high-precision oracles for the test suite.

Floating point (mpmath at 60 significant digits) appears only here, on
the oracle side: the package under test never touches it.  Oracle values
carry ~1e-55 relative error, far below any enclosure width asserted, but
containment checks still pad by ORACLE_PAD so a boundary-exact oracle can
never flake.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from mpmath import mp

mp.dps = 60

ORACLE_PAD = Fraction(1, 10**45)


def mpf_to_fraction(value) -> Fraction:
    """Exact rational value of an mpmath float (mpf values are dyadic)."""
    sign, man, exp, _ = mp.mpf(value)._mpf_
    if man == 0:
        if exp != 0:  # inf or nan encode with man == 0, exp != 0
            raise ValueError(f"non-finite oracle value {value!r}")
        return Fraction(0)
    result = Fraction(man) * Fraction(2) ** exp
    return -result if sign else result


def to_mpf(value: Fraction):
    return mp.mpf(value.numerator) / mp.mpf(value.denominator)


def oracle_series_value(tag: str, theta: Fraction, x: Fraction, order: int) -> Fraction:
    """Derivative of -theta x^2 - log(target) from elementary formulas."""
    th = to_mpf(theta)
    xx = to_mpf(x)
    if tag == "logcos":
        if order == 0:
            val = -th * xx**2 - mp.log(mp.cos(xx))
        elif order == 1:
            val = -2 * th * xx + mp.tan(xx)
        elif order == 2:
            val = -2 * th + 1 / mp.cos(xx) ** 2
        else:
            raise ValueError(order)
    elif tag == "logtan":
        if order == 0:
            val = -th * xx**2 - mp.log(xx / mp.tan(xx))
        elif order == 1:
            val = -2 * th * xx - 1 / xx + 2 / mp.sin(2 * xx)
        elif order == 2:
            val = -2 * th + 1 / xx**2 - 4 * mp.cos(2 * xx) / mp.sin(2 * xx) ** 2
        else:
            raise ValueError(order)
    else:
        raise ValueError(tag)
    return mpf_to_fraction(val)


def oracle_best_constant(tag: str, x0: Fraction) -> Fraction:
    """-log(target(x0)) / x0^2 at 60 significant digits."""
    xx = to_mpf(x0)
    if tag == "logcos":
        val = -mp.log(mp.cos(xx)) / xx**2
    elif tag == "logtan":
        val = -mp.log(xx / mp.tan(xx)) / xx**2
    else:
        raise ValueError(tag)
    return mpf_to_fraction(val)


def oracle_min_location(tag: str, theta: Fraction, guess: float = 0.74) -> Fraction:
    """Root of the first derivative (the unique minimum location)."""
    th = to_mpf(theta)
    if tag == "logcos":
        f = lambda x: -2 * th * x + mp.tan(x)
    elif tag == "logtan":
        f = lambda x: -2 * th * x - 1 / x + 2 / mp.sin(2 * x)
    else:
        raise ValueError(tag)
    return mpf_to_fraction(mp.findroot(f, mp.mpf(guess)))


def oracle_zero_location(tag: str, theta: Fraction, lo: float, hi: float) -> Fraction:
    """Root of -theta x^2 - log(target) by mpmath bisection."""
    th = to_mpf(theta)
    if tag == "logcos":
        f = lambda x: -th * x**2 - mp.log(mp.cos(x))
    elif tag == "logtan":
        f = lambda x: -th * x**2 - mp.log(x / mp.tan(x))
    else:
        raise ValueError(tag)
    return mpf_to_fraction(mp.findroot(f, (mp.mpf(lo), mp.mpf(hi)), solver="bisect"))


def machin_pi_half_bounds(terms: int = 60) -> tuple[Fraction, Fraction]:
    """Exact rational bounds on pi/2 from pi/4 = 4 atan(1/5) - atan(1/239).

    Alternating series with explicit remainder: the truth lies within one
    omitted term of each partial sum, so bounds are widened by that term
    on both sides.  60 terms leave a gap far below 1e-80.
    """

    def arctan_inv_bounds(n: int) -> tuple[Fraction, Fraction]:
        total = Fraction(0)
        sign = 1
        for k in range(terms):
            total += sign * Fraction(1, (2 * k + 1) * n ** (2 * k + 1))
            sign = -sign
        rem = Fraction(1, (2 * terms + 1) * n ** (2 * terms + 1))
        return total - rem, total + rem

    a_lo, a_hi = arctan_inv_bounds(5)
    b_lo, b_hi = arctan_inv_bounds(239)
    pi_lo = 16 * a_lo - 4 * b_hi
    pi_hi = 16 * a_hi - 4 * b_lo
    return pi_lo / 2, pi_hi / 2


def assert_contains(enc, value: Fraction, pad: Fraction = ORACLE_PAD) -> None:
    assert enc.lo - pad <= value <= enc.hi + pad, (
        f"value {float(value)} outside [{float(enc.lo)}, {float(enc.hi)}]"
    )


def enclosure_distance(enc, value: Fraction) -> Fraction:
    """0 if value is inside enc, else the gap to the nearest endpoint."""
    if value < enc.lo:
        return enc.lo - value
    if value > enc.hi:
        return value - enc.hi
    return Fraction(0)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260809)
