"""Bernoulli numbers and family coefficients against independent oracles."""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from squeezecert import (
    LOG_COS,
    LOG_TAN_RATIO,
    ResourceCapError,
    bernoulli_abs_2k,
    coeff,
    coeff_prefix,
    family_from_tag,
    pi_half_bounds,
)
from squeezecert.coefficients import ZETA_BOUND, _bernoulli_even
from squeezecert.errors import ParseError


def sympy_rational_to_fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


class TestBernoulli:
    def test_spot_values(self):
        assert bernoulli_abs_2k(1) == Fraction(1, 6)
        assert bernoulli_abs_2k(2) == Fraction(1, 30)
        assert bernoulli_abs_2k(4) == Fraction(1, 30)

    def test_against_sympy(self):
        for k in range(1, 41):
            expected = abs(sympy_rational_to_fraction(sympy.bernoulli(2 * k)))
            assert bernoulli_abs_2k(k) == expected, f"|B_{2 * k}| mismatch"

    def test_sign_alternation(self):
        # raw recurrence values satisfy (-1)^(k+1) B_2k > 0
        for k in range(1, 31):
            assert (-1) ** (k + 1) * _bernoulli_even(k) > 0

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            bernoulli_abs_2k(10, cap=5)

    def test_bad_index(self):
        with pytest.raises(ValueError):
            bernoulli_abs_2k(0)


class TestFamilies:
    def test_tags(self):
        assert family_from_tag("logcos") is LOG_COS
        assert family_from_tag("logtan") is LOG_TAN_RATIO
        with pytest.raises(ParseError):
            family_from_tag("logsin")

    def test_first_coefficients_match_c1(self):
        assert coeff(LOG_COS, 1) == LOG_COS.c1 == Fraction(1, 2)
        assert coeff(LOG_TAN_RATIO, 1) == LOG_TAN_RATIO.c1 == Fraction(1, 3)


class TestCoefficients:
    def test_logcos_spot_values(self):
        assert coeff(LOG_COS, 2) == Fraction(1, 12)
        assert coeff(LOG_COS, 3) == Fraction(1, 45)
        assert coeff(LOG_COS, 4) == Fraction(17, 2520)

    def test_logtan_spot_values(self):
        assert coeff(LOG_TAN_RATIO, 2) == Fraction(7, 90)
        assert coeff(LOG_TAN_RATIO, 3) == Fraction(62, 2835)
        assert coeff(LOG_TAN_RATIO, 4) == Fraction(127, 18900)

    def test_against_symbolic_series(self):
        # independent oracle: symbolic Taylor coefficients of the two
        # elementary log expressions at 0
        x = sympy.Symbol("x")
        upto = 10
        logcos_series = sympy.series(-sympy.log(sympy.cos(x)), x, 0, 2 * upto + 2)
        logtan_series = sympy.series(
            sympy.log(sympy.tan(x) / x), x, 0, 2 * upto + 2
        )
        for k in range(1, upto + 1):
            expected = sympy_rational_to_fraction(
                sympy.Rational(logcos_series.coeff(x, 2 * k))
            )
            assert coeff(LOG_COS, k) == expected
            expected = sympy_rational_to_fraction(
                sympy.Rational(logtan_series.coeff(x, 2 * k))
            )
            assert coeff(LOG_TAN_RATIO, k) == expected

    def test_prefix_matches_per_index(self):
        assert coeff_prefix(LOG_COS, 2) == [Fraction(1, 2), Fraction(1, 12)]
        assert coeff_prefix(LOG_TAN_RATIO, 1) == [Fraction(1, 3)]
        for family in (LOG_COS, LOG_TAN_RATIO):
            values = coeff_prefix(family, 12)
            assert values == [coeff(family, k) for k in range(1, 13)]

    def test_positivity_through_60(self):
        for family in (LOG_COS, LOG_TAN_RATIO):
            for k in range(1, 61):
                assert coeff(family, k) > 0

    def test_geometric_majorant_through_60(self):
        # coeff(family, k) <= (5/3) (2/pi_lo)^{2k} / k with pi_lo = 2 * (pi/2 lower bound);
        # this single inequality underwrites every truncation tail bound
        inv_end = 1 / pi_half_bounds().lo
        for family in (LOG_COS, LOG_TAN_RATIO):
            for k in range(2, 61):
                assert coeff(family, k) <= ZETA_BOUND * inv_end ** (2 * k) / k

    def test_cap_propagates(self):
        with pytest.raises(ResourceCapError):
            coeff(LOG_COS, 300, cap=250)
