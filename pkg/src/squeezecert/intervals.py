"""Exact rational scalars and rigorous interval enclosures.

Every certified quantity in this package is either an exact rational
(``fractions.Fraction``, kept in canonical form by construction) or an
:class:`Enclosure` — a closed interval with rational endpoints that is
guaranteed to contain the real value it stands for.  Floating point is
never used on a certified path; floats are rejected outright so rounding
can never flip the sign of a strict inequality.

Soundness contract: for any operation taking enclosures to an enclosure,
if the true real inputs lie in the input intervals then the true real
output lies in the output interval.  Endpoint arithmetic is exact, so
:func:`combine` returns the smallest such interval; :func:`round_outward`
may widen an interval but never shrinks it.

The only irrational constant the package needs is pi/2, provided by
:func:`pi_half_bounds` as a fixed 38-decimal-digit enclosure.  Its
correctness is checked in the test suite against an independent
arctangent-series computation of pi.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .errors import ParseError

RationalInput = Union[Fraction, int, str]


def as_rational(value: RationalInput) -> Fraction:
    """Coerce ``value`` to an exact :class:`Fraction`.

    Accepts integers, fractions and strings.  Floats are rejected: a float
    already carries binary rounding error, which would silently poison an
    exact computation.
    """
    if isinstance(value, bool):
        raise TypeError("cannot convert bool to an exact rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError(
            f"refusing float {value!r}: pass an exact string, int or Fraction"
        )
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse decimal or ``p/q`` text into an exact rational.

    Decimal strings convert exactly ("0.25" -> 1/4, "1e-7" -> 1/10000000);
    fraction strings keep their value ("7/90" -> 7/90).  The result is in
    canonical form: positive denominator, gcd(|p|, q) = 1.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected rational text, got {type(text).__name__}")
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty rational literal")
    try:
        return Fraction(stripped)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in rational literal {text!r}") from None
    except ValueError:
        raise ParseError(f"malformed rational literal {text!r}") from None


class Sign(Enum):
    """Certified sign verdict of an enclosure."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True, slots=True)
class Enclosure:
    """Closed rational interval [lo, hi] containing a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"inverted enclosure: {self.lo} > {self.hi}")

    @classmethod
    def point(cls, value: RationalInput) -> "Enclosure":
        v = as_rational(value)
        return cls(v, v)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: RationalInput) -> bool:
        v = as_rational(value)
        return self.lo <= v <= self.hi

    def encloses(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def sign(self) -> Sign:
        if self.lo > 0:
            return Sign.POSITIVE
        if self.hi < 0:
            return Sign.NEGATIVE
        return Sign.INDETERMINATE

    def __add__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other: "Enclosure") -> "Enclosure":
        return self + (-other)

    def __mul__(self, other: "Enclosure") -> "Enclosure":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Enclosure(min(products), max(products))

    def scale(self, factor: RationalInput) -> "Enclosure":
        """Multiply by an exact scalar (sign-aware endpoint swap)."""
        f = as_rational(factor)
        if f >= 0:
            return Enclosure(self.lo * f, self.hi * f)
        return Enclosure(self.hi * f, self.lo * f)


def combine(op: str, u: Enclosure, v: Optional[Enclosure] = None) -> Enclosure:
    """Interval arithmetic dispatcher over {add, sub, mul, neg}.

    ``neg`` ignores ``v``.  Endpoints are exact rationals, so the result is
    the smallest interval containing {x op y : x in u, y in v}.
    """
    if op == "neg":
        return -u
    if v is None:
        raise ValueError(f"binary interval op {op!r} needs a second operand")
    if op == "add":
        return u + v
    if op == "sub":
        return u - v
    if op == "mul":
        return u * v
    raise ValueError(f"unknown interval op {op!r}")


def dyadic_floor(value: RationalInput, bits: int) -> Fraction:
    """Largest multiple of 2**-bits that is <= value."""
    v = as_rational(value)
    scaled = v * (1 << bits)
    return Fraction(scaled.numerator // scaled.denominator, 1 << bits)


def dyadic_ceil(value: RationalInput, bits: int) -> Fraction:
    """Smallest multiple of 2**-bits that is >= value."""
    v = as_rational(value)
    scaled = v * (1 << bits)
    return Fraction(-((-scaled.numerator) // scaled.denominator), 1 << bits)


def round_outward(enc: Enclosure, budget: int) -> Enclosure:
    """Round endpoints outward onto the dyadic grid with step 2**-budget.

    Returns an enclosure containing ``enc`` whose endpoint denominators
    divide 2**budget; the width grows by at most 2**(1 - budget).  Used to
    cap rational blow-up in long partial sums at negligible width cost.
    """
    if budget < 1:
        raise ValueError("rounding budget must be >= 1")
    return Enclosure(dyadic_floor(enc.lo, budget), dyadic_ceil(enc.hi, budget))


# pi/2 truncated and rounded up at the 38th decimal; both endpoints are
# validated against an arctangent-series oracle in the tests.
_PI_HALF = Enclosure(
    Fraction(157079632679489661923132169163975144209, 10**38),
    Fraction(157079632679489661923132169163975144210, 10**38),
)


def pi_half_bounds() -> Enclosure:
    """Hard-coded rational enclosure of pi/2, width 1e-38."""
    return _PI_HALF


def to_decimal(value: RationalInput, direction: str, digits: int = 10) -> str:
    """Render an exact rational as a directed decimal string.

    ``direction`` is "floor" (toward -inf) or "ceil" (toward +inf); the
    rendered decimal is always on the stated side of the true value, so a
    pair of directed renderings never misrepresents an enclosure.  Output
    uses positional notation for moderate exponents and ``<m>e<exp>``
    otherwise; both forms re-parse exactly with :func:`parse_rational`.
    """
    if digits < 1:
        raise ValueError("need at least one significant digit")
    if direction not in ("floor", "ceil"):
        raise ValueError(f"unknown rounding direction {direction!r}")
    v = as_rational(value)
    if v == 0:
        return "0"
    if v < 0:
        flipped = "ceil" if direction == "floor" else "floor"
        return "-" + to_decimal(-v, flipped, digits)

    p, q = v.numerator, v.denominator
    # exponent e with 10^e <= p/q < 10^(e+1)
    e = len(str(p)) - len(str(q))
    while _compare_pow10(p, q, e) < 0:
        e -= 1
    while _compare_pow10(p, q, e + 1) >= 0:
        e += 1

    shift = digits - 1 - e
    if shift >= 0:
        num, den = p * 10**shift, q
    else:
        num, den = p, q * 10**(-shift)
    mantissa = num // den
    if direction == "ceil" and mantissa * den != num:
        mantissa += 1
    if mantissa == 10**digits:  # carry rolled over, e.g. 0.999... -> 1.000
        mantissa = 10 ** (digits - 1)
        e += 1

    s = str(mantissa)
    if digits - 1 <= e <= digits + 3:
        return s + "0" * (e - digits + 1)
    if 0 <= e < digits - 1:
        return s[: e + 1] + "." + s[e + 1 :]
    if -5 <= e < 0:
        return "0." + "0" * (-e - 1) + s
    return s[0] + "." + s[1:] + f"e{e:+d}"


def _compare_pow10(p: int, q: int, e: int) -> int:
    """Sign of p/q - 10^e for positive p, q."""
    if e >= 0:
        lhs, rhs = p, q * 10**e
    else:
        lhs, rhs = p * 10**(-e), q
    return (lhs > rhs) - (lhs < rhs)
