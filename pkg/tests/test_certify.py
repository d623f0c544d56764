"""Certificates: the monotone chain, bracketing, and re-verification."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from squeezecert import (
    CertificationError,
    DomainError,
    Enclosure,
    IndeterminateSignError,
    LOG_COS,
    LOG_TAN_RATIO,
    PerturbedSeries,
    Sign,
    best_constant,
    bracket_root,
    certify_positivity,
    certify_unique_zero,
    evaluate,
    verify_certificate,
)
from squeezecert.certify import KIND_POSITIVITY, KIND_UNIQUE_ZERO

from conftest import (
    assert_contains,
    enclosure_distance,
    oracle_min_location,
    oracle_zero_location,
)


class TestPositivity:
    def test_logcos_at_half(self):
        cert = certify_positivity(LOG_COS, Fraction(1, 2))
        assert cert.kind == KIND_POSITIVITY
        assert cert.zero_bracket is None and cert.min_bracket is None
        assert verify_certificate(cert).ok

    def test_logtan_at_third(self):
        cert = certify_positivity(LOG_TAN_RATIO, Fraction(1, 3))
        assert verify_certificate(cert).ok

    def test_zero_exponent(self):
        cert = certify_positivity(LOG_COS, 0)
        assert verify_certificate(cert).ok

    def test_rejects_theta_above_c1(self):
        with pytest.raises(CertificationError):
            certify_positivity(LOG_COS, Fraction(51, 100))


class TestUniqueZero:
    def test_rejects_theta_at_or_below_c1(self):
        with pytest.raises(CertificationError):
            certify_unique_zero(LOG_COS, Fraction(1, 2))
        with pytest.raises(CertificationError):
            certify_unique_zero(LOG_TAN_RATIO, Fraction(1, 4))

    def test_theta_point_six(self):
        theta = Fraction(3, 5)
        cert = certify_unique_zero(
            LOG_COS, theta, zero_tol=Fraction(1, 10**6), min_tol=Fraction(1, 10**6)
        )
        assert cert.kind == KIND_UNIQUE_ZERO
        assert cert.m == 3
        assert cert.min_bracket.hi < cert.zero_bracket.lo

        zero = oracle_zero_location("logcos", theta, 0.9, 1.0)
        assert_contains(cert.zero_bracket, zero)
        minimum = oracle_min_location("logcos", theta)
        assert_contains(cert.min_bracket, minimum)

        # the minimum value is negative everywhere inside the bracket
        series = PerturbedSeries(LOG_COS, theta)
        mid = cert.min_bracket.midpoint
        assert evaluate(series, mid, 0, Fraction(1, 10**9)).sign() is Sign.NEGATIVE

        assert verify_certificate(cert).ok

    def test_min_location_near_paper_constant_logcos(self):
        # theta equal to the six-digit decimal of -log cos 1
        theta = Fraction("0.615626")
        cert = certify_unique_zero(LOG_COS, theta, min_tol=Fraction(1, 10**6))
        assert_contains(cert.min_bracket, oracle_min_location("logcos", theta))
        assert enclosure_distance(cert.min_bracket, Fraction("0.736713")) < Fraction(1, 10**5)

    def test_min_location_near_paper_constant_logtan(self):
        theta = Fraction("0.443023")
        cert = certify_unique_zero(LOG_TAN_RATIO, theta, min_tol=Fraction(1, 10**6))
        assert_contains(cert.min_bracket, oracle_min_location("logtan", theta))
        assert enclosure_distance(cert.min_bracket, Fraction("0.737815")) < Fraction(1, 10**5)

    def test_theta_from_best_constant_puts_zero_at_interval_end(self):
        width = Fraction(1, 10**7)
        theta = best_constant(LOG_COS, 1, width).hi
        cert = certify_unique_zero(LOG_COS, theta, zero_tol=Fraction(1, 1000))
        zero = oracle_zero_location("logcos", theta, 0.99, 1.01)
        assert_contains(cert.zero_bracket, zero)
        # that zero sits just above 1, within a few enclosure widths
        assert abs(zero - 1) < 4 * width

    def test_comparative_statics(self):
        # a larger exponent constant pushes the zero to the right
        tol = Fraction(1, 10**4)
        lo = certify_unique_zero(LOG_COS, Fraction(3, 5), zero_tol=tol)
        hi = certify_unique_zero(LOG_COS, Fraction(7, 10), zero_tol=tol)
        assert lo.zero_bracket.hi < hi.zero_bracket.lo

    def test_soundness_sampling(self, rng):
        theta = Fraction(3, 5)
        cert = certify_unique_zero(LOG_COS, theta, zero_tol=Fraction(1, 10**4))
        series = PerturbedSeries(LOG_COS, theta)
        from squeezecert.certify import _certified_sign

        for _ in range(25):
            x = Fraction(rng.randint(1, 10**4), 10**4) * cert.zero_bracket.lo
            x = Fraction(x.numerator, x.denominator)
            if x == 0:
                continue
            assert _certified_sign(series, x, 0).sign is Sign.NEGATIVE
        span = Fraction(149, 100) - cert.zero_bracket.hi
        for _ in range(25):
            x = cert.zero_bracket.hi + Fraction(rng.randint(1, 10**4), 10**4) * span
            assert _certified_sign(series, x, 0).sign is Sign.POSITIVE

    def test_brute_force_equivalence(self, rng):
        # dense float scan of the elementary expression agrees with the
        # certified brackets to bracket width + grid pitch
        pitch = 1e-4
        xs = np.arange(0.01, 1.54, pitch)
        tol = Fraction(1, 1000)
        for family, tag, lo_theta in (
            (LOG_COS, "logcos", 0.56),
            (LOG_TAN_RATIO, "logtan", 0.40),
        ):
            for _ in range(10):
                theta = Fraction(rng.randint(int(lo_theta * 1000), 1100), 1000)
                cert = certify_unique_zero(family, theta, zero_tol=tol, min_tol=tol)
                th = float(theta)
                if tag == "logcos":
                    values = -th * xs**2 - np.log(np.cos(xs))
                else:
                    values = -th * xs**2 - np.log(xs / np.tan(xs))
                crossing = np.where((values[:-1] < 0) & (values[1:] >= 0))[0]
                assert len(crossing) == 1
                scan_zero = xs[crossing[0]]
                scan_min = xs[np.argmin(values)]
                assert abs(float(cert.zero_bracket.midpoint) - scan_zero) < float(tol) + 2 * pitch
                assert abs(float(cert.min_bracket.midpoint) - scan_min) < float(tol) + 2 * pitch

    def test_unreachable_margin_fails_loudly(self):
        # exponent constant absurdly close to c1: the chain cannot certify
        # signs at the needed scale and must say so, not silently coerce
        theta = Fraction(1, 2) + Fraction(1, 10**25)
        with pytest.raises(CertificationError):
            certify_unique_zero(LOG_COS, theta)


class TestBracketRoot:
    def test_basic_bracket(self):
        series = PerturbedSeries(LOG_COS, Fraction(3, 5))
        enc = bracket_root(series, 0, Fraction(9, 10), Fraction(6, 5), Fraction(1, 10**5))
        assert enc.width <= Fraction(1, 10**5)
        zero = oracle_zero_location("logcos", Fraction(3, 5), 0.9, 1.0)
        assert_contains(enc, zero)

    def test_first_derivative_bracket(self):
        theta = Fraction("0.615626")
        series = PerturbedSeries(LOG_COS, theta)
        enc = bracket_root(series, 1, Fraction(1, 2), Fraction(11, 10), Fraction(1, 10**6))
        assert_contains(enc, oracle_min_location("logcos", theta))
        assert enclosure_distance(enc, Fraction("0.736713")) < Fraction(1, 10**5)

    def test_rejects_bad_signs(self):
        series = PerturbedSeries(LOG_COS, Fraction(3, 5))
        with pytest.raises(CertificationError):
            bracket_root(series, 0, Fraction(1, 10), Fraction(1, 2), Fraction(1, 100))

    def test_rejects_bad_order_and_domain(self):
        series = PerturbedSeries(LOG_COS, Fraction(3, 5))
        with pytest.raises(ValueError):
            bracket_root(series, 2, Fraction(1, 2), Fraction(1), Fraction(1, 100))
        with pytest.raises(DomainError):
            bracket_root(series, 0, Fraction(1), Fraction(1, 2), Fraction(1, 100))

    def test_escalation_cap_env(self, monkeypatch):
        monkeypatch.setenv("SQUEEZE_BISECT_CAP", "0")
        with pytest.raises(IndeterminateSignError) as info:
            certify_unique_zero(LOG_COS, Fraction(3, 5), zero_tol=Fraction(1, 10**6))
        assert info.value.best_bracket is None or isinstance(
            info.value.best_bracket, Enclosure
        )


class TestVerification:
    @pytest.fixture(scope="class")
    def cert(self):
        return certify_unique_zero(
            LOG_COS, Fraction(3, 5), zero_tol=Fraction(1, 10**5), min_tol=Fraction(1, 10**5)
        )

    def test_fresh_certificate_verifies(self, cert):
        outcome = verify_certificate(cert)
        assert outcome.ok and not outcome.failures
        assert bool(outcome)

    def test_flipped_witness_sign_detected(self, cert):
        w = cert.witnesses[0]
        flipped = Sign.POSITIVE if w.sign is Sign.NEGATIVE else Sign.NEGATIVE
        tampered = replace(cert, witnesses=(replace(w, sign=flipped),) + cert.witnesses[1:])
        outcome = verify_certificate(tampered)
        assert not outcome.ok
        assert any("sign" in f for f in outcome.failures)

    def test_forged_enclosure_detected(self, cert):
        # witness whose recorded enclosure agrees with the recorded sign but
        # contradicts recomputation
        w = cert.witnesses[0]  # truly negative
        forged = replace(
            w, sign=Sign.POSITIVE, enclosure=Enclosure(Fraction(1), Fraction(2))
        )
        tampered = replace(cert, witnesses=(forged,) + cert.witnesses[1:])
        outcome = verify_certificate(tampered)
        assert not outcome.ok
        assert any("recomputed" in f for f in outcome.failures)

    def test_bracket_order_violation_detected(self, cert):
        tampered = replace(cert, min_bracket=Enclosure(Fraction(2, 1), Fraction(5, 2)))
        outcome = verify_certificate(tampered)
        assert not outcome.ok
        assert any("strictly before" in f for f in outcome.failures)

    def test_theta_kind_mismatch_detected(self, cert):
        tampered = replace(cert, theta=Fraction(1, 3))
        outcome = verify_certificate(tampered)
        assert not outcome.ok

    def test_wrong_domain_end_detected(self, cert):
        tampered = replace(cert, domain_end=Enclosure(Fraction(1), Fraction(2)))
        outcome = verify_certificate(tampered)
        assert not outcome.ok

    def test_positivity_with_brackets_detected(self):
        cert = certify_positivity(LOG_COS, Fraction(1, 2))
        tampered = replace(cert, zero_bracket=Enclosure(Fraction(1), Fraction(2)))
        outcome = verify_certificate(tampered)
        assert not outcome.ok
