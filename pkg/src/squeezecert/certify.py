"""Machine-checkable certificates for the perturbed even series.

Two certificate kinds are produced, both over the domain (0, pi/2):

* ``positivity`` — for theta <= c1 the leading coefficient c1 - theta is
  nonnegative and every further series coefficient is positive, so
  F_theta > 0 on the whole domain.  The certificate records the
  coefficient-positivity check depth.

* ``unique_zero`` — for theta > c1 the series has a negative quadratic
  term and positive higher terms.  A descending monotone chain then
  isolates one zero and one interior minimum:

  (a) the third termwise derivative is positive (the quadratic term
      vanishes at order 3), so F'' is strictly increasing;
  (b) F''(0+) = 2 (c1 - theta) < 0 exactly, and a certified-positive
      witness for F'' yields a unique zero of F'';
  (c) F'(0+) = 0 and F' decreases left of that zero, so F' < 0 there; a
      certified-positive witness for F' brackets the unique zero t0 of
      F' — the location of the sole minimum;
  (d) F(0+) = 0 and F decreases on (0, t0), so F < 0 there; a
      certified-positive witness for F brackets the unique zero x0 of F.

  Conclusion: F < 0 on (0, x0), F > 0 on (x0, pi/2), and the minimum
  value F(t0) < 0 is attained at the single point t0 < x0.

Neighbourhood-style conditions are replaced by exact limits at 0+ plus
finitely many witness points, each a concrete abscissa whose derivative
sign is certified by a series enclosure.  Certificates are data, not
trust: :func:`verify_certificate` re-derives every recorded verdict by
pure recomputation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .coefficients import FAMILIES, Family, coeff
from .errors import (
    CertificationError,
    ConvergenceError,
    DomainError,
    IndeterminateSignError,
    ParseError,
    SqueezeCertError,
)
from .intervals import Enclosure, RationalInput, Sign, as_rational, dyadic_floor, pi_half_bounds
from .series import DOMAIN_END, PerturbedSeries, evaluate_with_depth

KIND_POSITIVITY = "positivity"
KIND_UNIQUE_ZERO = "unique_zero"

BISECT_CAP_ENV = "SQUEEZE_BISECT_CAP"
DEFAULT_BISECT_CAP = 12

#: coefficient indices checked explicitly when issuing a certificate
POSITIVITY_CHECK_DEPTH = 60

_WITNESS_STEPS = 40
_NEGATIVE_WITNESS_STEPS = 60
_WITNESS_GRID_BITS = 64
_INITIAL_SIGN_WIDTH = Fraction(1, 1024)
_ESCALATION_SHRINK = 16


def escalation_cap() -> int:
    """Sign-escalation cap; override with the SQUEEZE_BISECT_CAP variable."""
    raw = os.environ.get(BISECT_CAP_ENV)
    if raw is None:
        return DEFAULT_BISECT_CAP
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"{BISECT_CAP_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ParseError(f"{BISECT_CAP_ENV} must be >= 0, got {value}")
    return value


@dataclass(frozen=True, slots=True)
class Witness:
    """A point whose derivative sign was certified by enclosure."""

    point: Fraction
    derivative_order: int
    sign: Sign
    enclosure: Enclosure


@dataclass(frozen=True, slots=True)
class Certificate:
    """Record of a positivity or unique-zero proof; plain immutable data."""

    kind: str
    family: Family
    theta: Fraction
    m: int
    witnesses: tuple[Witness, ...]
    zero_bracket: Optional[Enclosure]
    min_bracket: Optional[Enclosure]
    depth_used: int
    domain_end: Enclosure


@dataclass(frozen=True, slots=True)
class VerificationResult:
    ok: bool
    failures: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


class _SignOutcome:
    """Result of an escalated sign certification at one point."""

    __slots__ = ("sign", "enclosure", "depth")

    def __init__(self, sign: Sign, enclosure: Enclosure, depth: int):
        self.sign = sign
        self.enclosure = enclosure
        self.depth = depth


def _certified_sign(
    series: PerturbedSeries, x: Fraction, order: int, cap: Optional[int] = None
) -> _SignOutcome:
    """Evaluate at shrinking widths until the sign separates from zero.

    Starts loose and escalates by a fixed factor up to ``cap`` times.  If a
    tighter width stops converging within the depth cap, the best verdict so
    far is returned (possibly indeterminate); only a failure of the loosest
    evaluation propagates as :class:`ConvergenceError`.
    """
    if cap is None:
        cap = escalation_cap()
    width = _INITIAL_SIGN_WIDTH
    best: Optional[Enclosure] = None
    depth = 0
    for _ in range(cap + 1):
        try:
            enc, n = evaluate_with_depth(series, x, order, width)
        except ConvergenceError:
            if best is None:
                raise
            break
        best = enc
        depth = max(depth, n)
        verdict = enc.sign()
        if verdict is not Sign.INDETERMINATE:
            return _SignOutcome(verdict, enc, depth)
        width /= _ESCALATION_SHRINK
    return _SignOutcome(Sign.INDETERMINATE, best, depth)


def _positive_witness(series: PerturbedSeries, order: int) -> tuple[Witness, int]:
    """Walk a geometric schedule toward pi/2 until a positive sign certifies.

    The schedule x_j = domain_end * (1 - 2^-j), snapped down onto a dyadic
    grid, approaches the singularity where the series and its derivatives
    grow without bound, so a witness exists whenever the chain premises
    hold; points where certification fails (sign still negative, width
    indeterminate, or depth cap reached) are skipped.
    """
    depth = 0
    for j in range(1, _WITNESS_STEPS + 1):
        x = dyadic_floor(DOMAIN_END * (1 - Fraction(1, 2**j)), _WITNESS_GRID_BITS)
        if x <= 0:
            continue
        try:
            outcome = _certified_sign(series, x, order)
        except ConvergenceError:
            continue
        depth = max(depth, outcome.depth)
        if outcome.sign is Sign.POSITIVE:
            return Witness(x, order, Sign.POSITIVE, outcome.enclosure), depth
    raise CertificationError(
        f"no certified-positive witness for derivative order {order} "
        f"within {_WITNESS_STEPS} schedule steps (theta = {series.theta})"
    )


def _negative_witness(
    series: PerturbedSeries, order: int, anchor: Fraction
) -> tuple[Witness, int]:
    """Walk anchor / 2^i toward 0 until a negative sign certifies."""
    depth = 0
    for i in range(1, _NEGATIVE_WITNESS_STEPS + 1):
        x = anchor / (1 << i)
        try:
            outcome = _certified_sign(series, x, order)
        except ConvergenceError:
            continue
        depth = max(depth, outcome.depth)
        if outcome.sign is Sign.NEGATIVE:
            return Witness(x, order, Sign.NEGATIVE, outcome.enclosure), depth
    raise CertificationError(
        f"no certified-negative witness for derivative order {order} "
        f"below {anchor} (theta = {series.theta})"
    )


def _sign_witness_at(
    series: PerturbedSeries, x: Fraction, order: int, expected: Sign, role: str
) -> tuple[Witness, int]:
    """Certify the sign at a specific point, insisting on ``expected``."""
    outcome = _certified_sign(series, x, order)
    if outcome.sign is Sign.INDETERMINATE:
        raise IndeterminateSignError(
            f"sign of derivative order {order} at {x} stayed indeterminate "
            f"at maximum escalation ({role})",
            point=x,
            derivative_order=order,
            enclosure=outcome.enclosure,
        )
    if outcome.sign is not expected:
        raise CertificationError(
            f"{role}: expected {expected.value} sign at {x} "
            f"(order {order}), certified {outcome.sign.value}"
        )
    return Witness(x, order, expected, outcome.enclosure), outcome.depth


def _midpoint(lo: Fraction, hi: Fraction) -> Fraction:
    """Near-midpoint snapped to a coarse dyadic grid to keep numbers small."""
    gap = hi - lo
    bits = gap.denominator.bit_length() - gap.numerator.bit_length() + 6
    bits = max(bits, 4)
    mid = dyadic_floor((lo + hi) / 2, bits)
    if lo < mid < hi:
        return mid
    return (lo + hi) / 2


def _bisect(
    series: PerturbedSeries,
    order: int,
    lo_witness: Witness,
    hi_witness: Witness,
    tol: Fraction,
) -> tuple[Witness, Witness, int]:
    """Shrink a certified sign-change bracket to width <= tol.

    Invariant: the sign at the low endpoint is certified negative and at
    the high endpoint certified positive; by the monotone chain the unique
    root of this derivative order stays inside.  An indeterminate midpoint
    at maximum escalation aborts with the best bracket attached.
    """
    lo, hi = lo_witness, hi_witness
    depth = 0
    while hi.point - lo.point > tol:
        mid = _midpoint(lo.point, hi.point)
        outcome = _certified_sign(series, mid, order)
        depth = max(depth, outcome.depth)
        if outcome.sign is Sign.INDETERMINATE:
            raise IndeterminateSignError(
                f"bisection stalled: sign at {mid} (order {order}) "
                f"indeterminate at maximum escalation",
                point=mid,
                derivative_order=order,
                enclosure=outcome.enclosure,
                best_bracket=Enclosure(lo.point, hi.point),
            )
        witness = Witness(mid, order, outcome.sign, outcome.enclosure)
        if outcome.sign is Sign.NEGATIVE:
            lo = witness
        else:
            hi = witness
    return lo, hi, depth


def bracket_root(
    series: PerturbedSeries,
    derivative_order: int,
    lo_point: RationalInput,
    hi_point: RationalInput,
    tol: RationalInput,
) -> Enclosure:
    """Certified bisection of the unique root between two sign witnesses.

    The endpoints must certify negative (low) and positive (high) for the
    given derivative order; the returned bracket has width <= tol with the
    same certified signs at its endpoints.
    """
    if derivative_order not in (0, 1):
        raise ValueError("bracketing is defined for derivative orders 0 and 1")
    lo = as_rational(lo_point)
    hi = as_rational(hi_point)
    tolerance = as_rational(tol)
    if tolerance <= 0:
        raise ValueError("bracketing tolerance must be positive")
    if not 0 < lo < hi < DOMAIN_END:
        raise DomainError(
            f"bracket [{lo}, {hi}] not inside (0, {float(DOMAIN_END):.9f})"
        )
    lo_w, _ = _sign_witness_at(
        series, lo, derivative_order, Sign.NEGATIVE, "bracket low endpoint"
    )
    hi_w, _ = _sign_witness_at(
        series, hi, derivative_order, Sign.POSITIVE, "bracket high endpoint"
    )
    final_lo, final_hi, _ = _bisect(series, derivative_order, lo_w, hi_w, tolerance)
    return Enclosure(final_lo.point, final_hi.point)


def _check_coefficient_positivity(family: Family, upto: int) -> None:
    for k in range(1, upto + 1):
        if coeff(family, k) <= 0:
            raise CertificationError(
                f"series coefficient {k} of family {family.tag} is not positive"
            )


def certify_positivity(family: Family, theta: RationalInput) -> Certificate:
    """Certificate that F_theta > 0 on (0, pi/2), valid for theta <= c1.

    The quadratic coefficient c1 - theta is then nonnegative and every
    other coefficient is a positive rational built from powers of two and
    |B_2k| > 0; positivity is verified explicitly through the recorded
    check depth.
    """
    theta = as_rational(theta)
    if theta > family.c1:
        raise CertificationError(
            f"positivity requires theta <= {family.c1}, got {theta}"
        )
    _check_coefficient_positivity(family, POSITIVITY_CHECK_DEPTH)
    return Certificate(
        kind=KIND_POSITIVITY,
        family=family,
        theta=theta,
        m=3,
        witnesses=(),
        zero_bracket=None,
        min_bracket=None,
        depth_used=POSITIVITY_CHECK_DEPTH,
        domain_end=pi_half_bounds(),
    )


def certify_unique_zero(
    family: Family,
    theta: RationalInput,
    zero_tol: RationalInput = Fraction(1, 10**7),
    min_tol: RationalInput = Fraction(1, 10**6),
) -> Certificate:
    """Certificate that F_theta has exactly one zero and one minimum.

    Runs the monotone chain described in the module docstring and returns
    brackets for the minimum location (width <= min_tol) and the zero
    (width <= zero_tol), with min_bracket.hi < zero_bracket.lo.  Witness
    search failures and indeterminate bisection midpoints raise; they are
    never silently coerced.
    """
    theta = as_rational(theta)
    zero_tolerance = as_rational(zero_tol)
    min_tolerance = as_rational(min_tol)
    if theta <= family.c1:
        raise CertificationError(
            f"unique-zero certification requires theta > {family.c1}, got {theta}"
        )
    if zero_tolerance <= 0 or min_tolerance <= 0:
        raise ValueError("bracket tolerances must be positive")

    series = PerturbedSeries(family, theta)
    depth = 0

    # (a) third-derivative positivity is termwise; record the coefficient check
    _check_coefficient_positivity(family, POSITIVITY_CHECK_DEPTH)

    # (b) second derivative: starts at 2(c1 - theta) < 0, certified positive later on
    pos2, d = _positive_witness(series, 2)
    depth = max(depth, d)
    neg2, d = _negative_witness(series, 2, pos2.point)
    depth = max(depth, d)

    # (c) first derivative: negative left of the F'' zero, positive witness,
    # bisect to the minimum location t0
    neg1, d = _sign_witness_at(
        series, neg2.point, 1, Sign.NEGATIVE, "first-derivative start"
    )
    depth = max(depth, d)
    pos1, d = _positive_witness(series, 1)
    depth = max(depth, d)
    min_lo, min_hi, d = _bisect(series, 1, neg1, pos1, min_tolerance)
    depth = max(depth, d)
    min_bracket = Enclosure(min_lo.point, min_hi.point)

    # the minimum bracket must sit right of the F'' zero: required by error
    # analysis (F' is increasing across the bracket) and true by a wide margin
    convex, d = _sign_witness_at(
        series, min_lo.point, 2, Sign.POSITIVE, "bracket convexity check"
    )
    depth = max(depth, d)

    # (d) the series itself: negative just right of t0, positive witness,
    # bisect to the zero x0
    neg0, d = _sign_witness_at(
        series, min_hi.point, 0, Sign.NEGATIVE, "zero-bracket start"
    )
    depth = max(depth, d)
    pos0, d = _positive_witness(series, 0)
    depth = max(depth, d)
    zero_lo, zero_hi, d = _bisect(series, 0, neg0, pos0, zero_tolerance)
    depth = max(depth, d)
    zero_bracket = Enclosure(zero_lo.point, zero_hi.point)

    if not min_bracket.hi < zero_bracket.lo:
        raise CertificationError(
            "minimum bracket was not separated from the zero bracket; "
            "retry with tighter tolerances"
        )

    witnesses = (neg2, pos2, min_lo, min_hi, convex, zero_lo, zero_hi)
    return Certificate(
        kind=KIND_UNIQUE_ZERO,
        family=family,
        theta=theta,
        m=3,
        witnesses=witnesses,
        zero_bracket=zero_bracket,
        min_bracket=min_bracket,
        depth_used=depth,
        domain_end=pi_half_bounds(),
    )


def verify_certificate(cert: Certificate) -> VerificationResult:
    """Re-check a certificate by pure recomputation; never raises.

    Returns a result whose ``failures`` list pinpoints every violated
    condition: structural invariants, bracket ordering, witness signs
    reproduced by fresh enclosure evaluation, and coefficient positivity.
    """
    failures: list[str] = []

    if cert.m != 3:
        failures.append(f"unsupported chain length m = {cert.m}")
    known = FAMILIES.get(cert.family.tag)
    if known is None or known.c1 != cert.family.c1:
        failures.append(f"unknown or inconsistent family {cert.family.tag!r}")
        return VerificationResult(False, tuple(failures))
    if cert.domain_end != pi_half_bounds():
        failures.append("domain end does not match the certified pi/2 bounds")

    series = PerturbedSeries(cert.family, cert.theta)

    if cert.kind == KIND_POSITIVITY:
        if cert.theta > cert.family.c1:
            failures.append(
                f"positivity kind requires theta <= {cert.family.c1}, got {cert.theta}"
            )
        if cert.zero_bracket is not None or cert.min_bracket is not None:
            failures.append("positivity certificate must not carry brackets")
    elif cert.kind == KIND_UNIQUE_ZERO:
        if cert.theta <= cert.family.c1:
            failures.append(
                f"unique-zero kind requires theta > {cert.family.c1}, got {cert.theta}"
            )
        if cert.zero_bracket is None or cert.min_bracket is None:
            failures.append("unique-zero certificate must carry both brackets")
        else:
            mb, zb = cert.min_bracket, cert.zero_bracket
            if not 0 < mb.lo:
                failures.append("minimum bracket must start above 0")
            if not mb.hi < zb.lo:
                failures.append("minimum bracket must end strictly before the zero bracket")
            if not zb.hi < cert.domain_end.lo:
                failures.append("zero bracket must end strictly inside the domain")
            for point, order, expected, label in (
                (mb.lo, 1, Sign.NEGATIVE, "first derivative at minimum bracket start"),
                (mb.hi, 1, Sign.POSITIVE, "first derivative at minimum bracket end"),
                (mb.lo, 2, Sign.POSITIVE, "second derivative at minimum bracket start"),
                (zb.lo, 0, Sign.NEGATIVE, "series at zero bracket start"),
                (zb.hi, 0, Sign.POSITIVE, "series at zero bracket end"),
            ):
                try:
                    outcome = _certified_sign(series, point, order)
                except SqueezeCertError as exc:
                    failures.append(f"{label}: re-evaluation failed ({exc})")
                    continue
                if outcome.sign is not expected:
                    failures.append(
                        f"{label}: expected {expected.value}, got {outcome.sign.value}"
                    )
    else:
        failures.append(f"unknown certificate kind {cert.kind!r}")

    try:
        _check_coefficient_positivity(cert.family, max(1, min(cert.depth_used, 200)))
    except SqueezeCertError as exc:
        failures.append(str(exc))

    for w in cert.witnesses:
        if w.derivative_order not in (0, 1, 2):
            failures.append(f"witness at {w.point}: bad derivative order")
            continue
        if w.sign is Sign.INDETERMINATE:
            failures.append(f"witness at {w.point}: indeterminate sign recorded")
            continue
        if not 0 < w.point < cert.domain_end.lo:
            failures.append(f"witness at {w.point}: outside the domain")
            continue
        if w.enclosure.sign() is not w.sign:
            failures.append(
                f"witness at {w.point}: recorded enclosure does not show "
                f"the recorded {w.sign.value} sign"
            )
            continue
        try:
            outcome = _certified_sign(series, w.point, w.derivative_order)
        except SqueezeCertError as exc:
            failures.append(f"witness at {w.point}: re-evaluation failed ({exc})")
            continue
        if outcome.sign is not w.sign:
            failures.append(
                f"witness at {w.point} (order {w.derivative_order}): recomputed "
                f"sign {outcome.sign.value} != recorded {w.sign.value}"
            )

    return VerificationResult(not failures, tuple(failures))
