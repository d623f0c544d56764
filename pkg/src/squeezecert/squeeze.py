"""Best-constant enclosures, squeeze certification, and error reports.

For a family target h (cos x or x/tan x) and an interval end x0 inside
(0, pi/2), the two-sided bound

    exp(-theta* x^2) < h(x) < exp(-c1 x^2)      for all x in (0, x0)

is certified in the log domain: the upper side is a positivity
certificate at theta = c1, and the lower side a unique-zero certificate
at theta* = the upper endpoint of the best-constant enclosure, refined
until its zero bracket starts at or beyond x0.  Rounding the constant
*up* is the sound direction — any theta at or above the true best
constant keeps the lower bound valid, since the exponential decreases in
theta.  The best constant itself is transcendental for the inputs of
interest, so it is always reported as an enclosure, never as a claimed
exact decimal.

The error report measures how far the quadratic exponent is from the log
target: the gap -theta x^2 - log h(x) attains its single most-negative
value at the certified minimum location t0, and |F(t0)| is enclosed from
the bracket endpoints with a local slope bound (F' is increasing across
the bracket, which the certificate's convexity witness guarantees).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .certify import Certificate, certify_positivity, certify_unique_zero
from .coefficients import Family
from .errors import CertificationError, DomainError, SqueezeCertError
from .intervals import Enclosure, RationalInput, as_rational
from .series import DOMAIN_END, PerturbedSeries, best_constant_series, evaluate

DEFAULT_CONSTANT_WIDTH = Fraction(1, 10**7)
DEFAULT_ERROR_TOL = Fraction(1, 10**6)

_REFINE_STEPS = 12
_COARSE_ZERO_TOL = Fraction(1, 1000)


@dataclass(frozen=True, slots=True)
class SqueezeResult:
    """Both sides of the squeeze on (0, x0), with their certificates."""

    family: Family
    x0: Fraction
    best_constant: Enclosure
    upper_constant: Fraction
    lower_cert: Certificate
    upper_cert: Certificate
    certified_interval_end: Fraction


@dataclass(frozen=True, slots=True)
class ErrorReport:
    """Enclosures of the minimum location t0 and the largest error delta."""

    family: Family
    x0: Fraction
    theta: Fraction
    t0: Enclosure
    delta: Enclosure


@dataclass(frozen=True, slots=True)
class ScanRow:
    x0: Fraction
    best_constant: Optional[Enclosure]
    t0: Optional[Enclosure]
    delta: Optional[Enclosure]
    error: Optional[str]


def best_constant(
    family: Family,
    x0: RationalInput,
    target_width: RationalInput = DEFAULT_CONSTANT_WIDTH,
) -> Enclosure:
    """Enclosure of the smallest exponent constant valid on (0, x0).

    Equals c1 + sum_{k>=2} g_k x0^{2k-2}; the lower endpoint is strictly
    above c1 for every admissible x0.
    """
    return best_constant_series(family, x0, target_width)


def certify_squeeze(
    family: Family,
    x0: RationalInput,
    width: RationalInput = DEFAULT_CONSTANT_WIDTH,
) -> SqueezeResult:
    """Certify the two-sided squeeze on (0, x0) at enclosure width ``width``.

    The zero bracket of the lower certificate is refined (halving the
    bracketing tolerance up to 12 times) until it starts at or beyond x0,
    which is what makes the lower bound valid on the whole interval.  If
    the rounded-up constant is too close to the true best constant for the
    bracket to separate, a :class:`CertificationError` reports exhaustion.
    """
    x0 = as_rational(x0)
    w = as_rational(width)
    if w <= 0:
        raise ValueError("enclosure width must be positive")
    constant = best_constant(family, x0, w)
    theta_star = constant.hi
    min_tol = max(w, Fraction(1, 10**6))
    zero_tol = w
    lower: Optional[Certificate] = None
    for _ in range(_REFINE_STEPS + 1):
        candidate = certify_unique_zero(
            family, theta_star, zero_tol=zero_tol, min_tol=min_tol
        )
        if x0 <= candidate.zero_bracket.lo:
            lower = candidate
            break
        zero_tol /= 2
    if lower is None:
        raise CertificationError(
            f"zero bracket still starts left of x0 = {x0} after "
            f"{_REFINE_STEPS} refinements; the rounded-up constant is too close "
            "to the true best constant — request a larger width"
        )
    upper = certify_positivity(family, family.c1)
    return SqueezeResult(
        family=family,
        x0=x0,
        best_constant=constant,
        upper_constant=family.c1,
        lower_cert=lower,
        upper_cert=upper,
        certified_interval_end=lower.zero_bracket.lo,
    )


def max_error(
    family: Family,
    x0: RationalInput,
    tol: RationalInput = DEFAULT_ERROR_TOL,
) -> ErrorReport:
    """Enclose the largest gap between the quadratic bound and the log target.

    With theta the rounded-up best constant for (0, x0), the gap function
    F_theta is negative on (0, x0) with a single minimum at t0; delta is
    |F_theta(t0)|.  The upper delta endpoint uses a slope bound L valid
    because F' increases across the minimum bracket [u, v]:

        delta <= -(F(u).lo - L (v - u)),   delta >= -min(F(u).hi, F(v).hi).
    """
    x0 = as_rational(x0)
    tolerance = as_rational(tol)
    if tolerance <= 0:
        raise ValueError("bracket tolerance must be positive")
    constant = best_constant(family, x0, tolerance / 10)
    theta = constant.hi
    cert = certify_unique_zero(
        family, theta, zero_tol=_COARSE_ZERO_TOL, min_tol=tolerance
    )
    u, v = cert.min_bracket.lo, cert.min_bracket.hi
    if not v < x0:
        raise CertificationError(
            f"minimum bracket [{u}, {v}] not separated below x0 = {x0}"
        )
    series = PerturbedSeries(family, theta)
    eval_width = tolerance / 100
    f_u = evaluate(series, u, 0, eval_width)
    f_v = evaluate(series, v, 0, eval_width)
    f1_u = evaluate(series, u, 1, eval_width)
    f1_v = evaluate(series, v, 1, eval_width)
    slope = max(abs(f1_u.lo), abs(f1_u.hi), abs(f1_v.lo), abs(f1_v.hi))
    delta_hi = slope * (v - u) - f_u.lo
    delta_lo = -min(f_u.hi, f_v.hi)
    if delta_lo <= 0:
        raise CertificationError(
            "largest-error lower bound did not separate from zero; "
            "request a smaller tolerance"
        )
    return ErrorReport(
        family=family,
        x0=x0,
        theta=theta,
        t0=Enclosure(u, v),
        delta=Enclosure(delta_lo, delta_hi),
    )


def scan(
    family: Family,
    start: RationalInput,
    stop: RationalInput,
    steps: int,
    *,
    width: RationalInput = DEFAULT_CONSTANT_WIDTH,
    tol: RationalInput = DEFAULT_ERROR_TOL,
) -> list[ScanRow]:
    """Best constant and error report over a uniform grid of interval ends.

    Produces steps + 1 rows ordered by ascending x0; the best-constant
    column is strictly increasing.  Rows that fail (for example by hitting
    the depth cap near pi/2) record the error and the scan continues.
    Rows are independent, so they could be computed concurrently; output
    order is by grid position either way.
    """
    lo = as_rational(start)
    hi = as_rational(stop)
    if not isinstance(steps, int) or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    if not (0 < lo < hi < DOMAIN_END):
        raise DomainError(
            f"scan range [{lo}, {hi}] must satisfy 0 < start < stop < "
            f"{float(DOMAIN_END):.9f}"
        )
    pitch = (hi - lo) / steps
    rows: list[ScanRow] = []
    for i in range(steps + 1):
        x0 = lo + i * pitch
        try:
            constant = best_constant(family, x0, width)
            report = max_error(family, x0, tol)
            rows.append(ScanRow(x0, constant, report.t0, report.delta, None))
        except SqueezeCertError as exc:
            rows.append(ScanRow(x0, None, None, None, str(exc)))
    return rows
