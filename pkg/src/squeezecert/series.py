"""Rigorous enclosure evaluation of the perturbed even series.

For a family with coefficients ``g_k > 0`` and first coefficient ``c1``,
and a candidate exponent constant ``theta``, this module evaluates

    F_theta(x) = (c1 - theta) x^2 + sum_{k>=2} g_k x^{2k}

and its termwise derivatives up to order 3, returning enclosures of the
form [S, S + T]: S is the exact partial sum through index N and T >= 0 a
rigorous bound on the omitted tail.  Since every term with k >= 2 is
positive, the tail is one-sided and the lower endpoint is the exact
partial sum (before optional outward rounding of oversized rationals).

F_theta equals -theta x^2 - log(cos x) for the logcos family and
-theta x^2 - log(x / tan x) for logtan, identities the test suite checks
against a high-precision oracle; the package itself never evaluates a
transcendental function — all certification happens in the log domain.

Tail bounds use the coefficient majorant g_k <= Z * (2/pi_lo)^{2k} / k
(see :mod:`squeezecert.coefficients`, Z = 5/3) with r = (2x/pi_lo)^2:

    order 0:  T = Z * r^{N+1} / ((N+1) (1 - r))
    order 1:  T = Z * 2 r^{N+1} / (1 - r) / x
    order 2:  T = Z * 4 * sum_{k>N} k r^k / x^2
    order 3:  T = Z * 8 * sum_{k>N} k^2 r^k / x^3

where the k and k^2 geometric moments have exact closed forms.  The
derivative factor (2k)(2k-1)...(2k-d+1) is bounded by (2k)^d.  All tail
arithmetic runs on a dyadic upper rounding of r, which keeps numbers
small and errs on the wide (sound) side.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .coefficients import Family, ZETA_BOUND, coeff
from .errors import ConvergenceError, DomainError, ParseError
from .intervals import (
    Enclosure,
    RationalInput,
    as_rational,
    dyadic_ceil,
    pi_half_bounds,
    round_outward,
)

#: Certified lower bound of pi/2; the open evaluation domain is (0, DOMAIN_END).
DOMAIN_END = pi_half_bounds().lo

DEFAULT_DEPTH_CAP = 200
DEPTH_CAP_ENV = "SQUEEZE_DEPTH_CAP"

DEFAULT_TARGET_WIDTH = Fraction(1, 10**9)

# partial sums are rounded outward once their denominators pass the
# trigger, at a width cost of 2^(1-budget) — invisible at any useful width
_ROUND_TRIGGER_BITS = 4096
_ROUND_BUDGET_BITS = 256
_RATIO_BITS = 192  # dyadic upper-rounding precision for the tail ratio r


def depth_cap() -> int:
    """Series depth cap; override with the SQUEEZE_DEPTH_CAP variable."""
    raw = os.environ.get(DEPTH_CAP_ENV)
    if raw is None:
        return DEFAULT_DEPTH_CAP
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"{DEPTH_CAP_ENV} must be an integer, got {raw!r}") from None
    if value < 4:
        raise ParseError(f"{DEPTH_CAP_ENV} must be >= 4, got {value}")
    return value


@dataclass(frozen=True, slots=True)
class PerturbedSeries:
    """A family series with its quadratic coefficient perturbed to c1 - theta."""

    family: Family
    theta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "theta", as_rational(self.theta))

    @property
    def leading_coefficient(self) -> Fraction:
        return self.family.c1 - self.theta


def _check_domain(x: Fraction) -> None:
    if not 0 < x < DOMAIN_END:
        raise DomainError(
            f"abscissa {x} outside the certified domain (0, {float(DOMAIN_END):.9f})"
        )


def _falling(n: int, d: int) -> int:
    """n (n-1) ... (n-d+1); the termwise derivative factor."""
    out = 1
    for j in range(d):
        out *= n - j
    return out


def partial_sum(series: PerturbedSeries, x: Fraction, order: int, depth: int) -> Fraction:
    """Exact partial sum of the order-th termwise derivative through index ``depth``."""
    lam = series.leading_coefficient
    if order == 0:
        total = lam * x * x
    elif order == 1:
        total = 2 * lam * x
    elif order == 2:
        total = 2 * lam
    else:
        total = Fraction(0)
    x2 = x * x
    power = x ** (4 - order)  # x^{2k - order} at k = 2
    for k in range(2, depth + 1):
        total += coeff(series.family, k) * _falling(2 * k, order) * power
        power *= x2
    return total


def tail_bound(family: Family, x: RationalInput, depth: int, order: int = 0) -> Fraction:
    """Upper bound on the omitted tail sum_{k>depth} g_k * (deriv factor) * x^{2k-order}.

    Strictly positive, decreasing in ``depth``, and valid for every k > depth
    because the coefficient majorant is (see module docstring).
    """
    x = as_rational(x)
    _check_domain(x)
    if depth < 2:
        raise ValueError(f"tail depth must be >= 2, got {depth}")
    if order not in (0, 1, 2, 3):
        raise ValueError(f"derivative order must be in 0..3, got {order}")

    r = dyadic_ceil((x / DOMAIN_END) ** 2, _RATIO_BITS)
    if r >= 1:
        raise ConvergenceError(
            f"abscissa {x} too close to the domain end for a finite tail bound"
        )
    n1 = depth + 1
    geo = r**n1 / (1 - r)
    if order == 0:
        return ZETA_BOUND * geo / n1
    if order == 1:
        return ZETA_BOUND * 2 * geo / x
    # exact geometric moments: sum_{k>N} k r^k and sum_{k>N} k^2 r^k
    moment1 = r**n1 * (Fraction(n1) / (1 - r) + r / (1 - r) ** 2)
    if order == 2:
        return ZETA_BOUND * 4 * moment1 / (x * x)
    moment2 = r**n1 * (
        Fraction(n1 * n1) / (1 - r)
        + 2 * n1 * r / (1 - r) ** 2
        + r * (1 + r) / (1 - r) ** 3
    )
    return ZETA_BOUND * 8 * moment2 / (x * x * x)


def _smallest_adequate_depth(
    family: Family, x: Fraction, order: int, target: Fraction, cap: int
) -> int:
    """Smallest depth whose tail bound is <= target, or ConvergenceError.

    Grows by doubling, then binary-searches back so the returned tail is
    not vastly smaller than requested: downstream soundness margins (for
    example the gap between a rounded-up constant and the true one) are
    proportional to the achieved tail, so overshooting is wasteful.
    """
    if tail_bound(family, x, 2, order) <= target:
        return 2
    inadequate = 2
    n = min(8, cap)
    while True:
        if tail_bound(family, x, n, order) <= target:
            adequate = n
            break
        inadequate = n
        if n >= cap:
            raise ConvergenceError(
                f"tail width {float(target):.3e} unreachable at depth cap {cap} "
                f"for x = {float(x):.6f} (order {order})"
            )
        n = min(2 * n, cap)
    while adequate - inadequate > 1:
        mid = (adequate + inadequate) // 2
        if tail_bound(family, x, mid, order) <= target:
            adequate = mid
        else:
            inadequate = mid
    return adequate


def evaluate_with_depth(
    series: PerturbedSeries,
    x: RationalInput,
    order: int = 0,
    target_width: RationalInput = DEFAULT_TARGET_WIDTH,
) -> tuple[Enclosure, int]:
    """Enclosure of the order-th derivative of F_theta at x, plus depth used."""
    x = as_rational(x)
    width = as_rational(target_width)
    if order not in (0, 1, 2, 3):
        raise ValueError(f"derivative order must be in 0..3, got {order}")
    if width <= 0:
        raise ValueError("target width must be positive")
    _check_domain(x)
    depth = _smallest_adequate_depth(series.family, x, order, width, depth_cap())
    exact = partial_sum(series, x, order, depth)
    enc = Enclosure(exact, exact + tail_bound(series.family, x, depth, order))
    return _round_if_large(enc), depth


def evaluate(
    series: PerturbedSeries,
    x: RationalInput,
    order: int = 0,
    target_width: RationalInput = DEFAULT_TARGET_WIDTH,
) -> Enclosure:
    """Enclosure of the order-th derivative of F_theta at x.

    The width is at most ``target_width`` whenever that is reachable within
    the depth cap; otherwise :class:`ConvergenceError` is raised (this
    happens as x approaches pi/2, where the term ratio approaches 1).
    """
    enc, _ = evaluate_with_depth(series, x, order, target_width)
    return enc


def best_constant_series(
    family: Family,
    x0: RationalInput,
    target_width: RationalInput = Fraction(1, 10**7),
) -> Enclosure:
    """Enclosure of c1 + sum_{k>=2} g_k x0^{2k-2}.

    This series equals -log(cos x0)/x0^2 for logcos and
    -log(x0/tan x0)/x0^2 for logtan: the exponent constant that makes the
    perturbed series vanish exactly at x0.  The lower endpoint is a partial
    sum with at least the k = 2 term, hence strictly greater than c1.
    """
    x0 = as_rational(x0)
    width = as_rational(target_width)
    if width <= 0:
        raise ValueError("target width must be positive")
    _check_domain(x0)
    x0sq = x0 * x0
    # the x^{2k-2} tail is the order-0 tail divided by x0^2
    depth = _smallest_adequate_depth(family, x0, 0, width * x0sq, depth_cap())
    power = x0sq  # x0^{2k-2} at k = 2
    total = family.c1
    for k in range(2, depth + 1):
        total += coeff(family, k) * power
        power *= x0sq
    tail = tail_bound(family, x0, depth, 0) / x0sq
    return _round_if_large(Enclosure(total, total + tail))


def _round_if_large(enc: Enclosure) -> Enclosure:
    if (
        max(enc.lo.denominator.bit_length(), enc.hi.denominator.bit_length())
        > _ROUND_TRIGGER_BITS
    ):
        return round_outward(enc, _ROUND_BUDGET_BITS)
    return enc
