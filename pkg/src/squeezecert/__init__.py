"""Certified enclosures for exponential squeeze bounds on cos x and x/tan x.

The package proves, with exact rational arithmetic only, two-sided bounds

    exp(-a x^2) < cos x     < exp(-x^2 / 2)
    exp(-b x^2) < x / tan x < exp(-x^2 / 3)

on intervals (0, x0) inside (0, pi/2), computes rigorous enclosures of the
best possible constants a and b and of the largest approximation error,
and emits machine-checkable certificates that an independent pass can
re-verify.  See the README for the CLI.
"""

from .certify import (
    Certificate,
    VerificationResult,
    Witness,
    bracket_root,
    certify_positivity,
    certify_unique_zero,
    verify_certificate,
)
from .coefficients import (
    FAMILIES,
    LOG_COS,
    LOG_TAN_RATIO,
    Family,
    bernoulli_abs_2k,
    coeff,
    coeff_prefix,
    family_from_tag,
)
from .errors import (
    CertificationError,
    ConvergenceError,
    DomainError,
    IndeterminateSignError,
    ParseError,
    ResourceCapError,
    SqueezeCertError,
)
from .intervals import (
    Enclosure,
    Sign,
    as_rational,
    combine,
    parse_rational,
    pi_half_bounds,
    round_outward,
    to_decimal,
)
from .series import (
    DOMAIN_END,
    PerturbedSeries,
    best_constant_series,
    evaluate,
    partial_sum,
    tail_bound,
)
from .squeeze import (
    ErrorReport,
    ScanRow,
    SqueezeResult,
    best_constant,
    certify_squeeze,
    max_error,
    scan,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CertificationError",
    "ConvergenceError",
    "DOMAIN_END",
    "DomainError",
    "Enclosure",
    "ErrorReport",
    "FAMILIES",
    "Family",
    "IndeterminateSignError",
    "LOG_COS",
    "LOG_TAN_RATIO",
    "ParseError",
    "PerturbedSeries",
    "ResourceCapError",
    "ScanRow",
    "Sign",
    "SqueezeCertError",
    "SqueezeResult",
    "VerificationResult",
    "Witness",
    "as_rational",
    "bernoulli_abs_2k",
    "best_constant",
    "best_constant_series",
    "bracket_root",
    "certify_positivity",
    "certify_squeeze",
    "certify_unique_zero",
    "coeff",
    "coeff_prefix",
    "combine",
    "evaluate",
    "family_from_tag",
    "max_error",
    "parse_rational",
    "partial_sum",
    "pi_half_bounds",
    "round_outward",
    "scan",
    "tail_bound",
    "to_decimal",
    "verify_certificate",
]
