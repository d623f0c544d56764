"""Exact Bernoulli numbers and the series coefficients of the two families.

The package certifies bounds for two even power series on (0, pi/2):

* ``logcos``:  -log(cos x)     = sum_{k>=1} c_k x^{2k},
  c_k = 2^{2k-1} (2^{2k} - 1) |B_{2k}| / (k (2k)!)
* ``logtan``:  -log(x / tan x) = sum_{k>=1} d_k x^{2k},
  d_k = 2^{2k} (2^{2k-1} - 1) |B_{2k}| / (k (2k)!)

with B_{2k} the Bernoulli numbers.  All coefficients are positive exact
rationals; the first ones are c_1 = 1/2 and d_1 = 1/3 (forced by the
x^2 leading terms of the two functions).  Every coefficient satisfies the
geometric majorant

    coeff(family, k) <= ZETA_BOUND * (2 / pi_lo)^{2k} / k,

a consequence of |B_{2k}| = 2 (2k)! zeta(2k) / (2 pi)^{2k} together with
zeta(2k) <= zeta(2) < 5/3; the series module builds all its truncation
tail bounds from exactly this inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from threading import Lock

from .errors import ParseError, ResourceCapError

# exceeds zeta(2) = pi^2/6 = 1.6449...; exactly representable on purpose
ZETA_BOUND = Fraction(5, 3)

DEFAULT_INDEX_CAP = 200

# B_0, B_2, B_4, ... as signed exact rationals, grown on demand and never
# evicted.  Guarded by a lock so concurrent callers see a consistent list.
_even_bernoulli: list[Fraction] = [Fraction(1)]
_bernoulli_lock = Lock()


def _bernoulli_even(k: int) -> Fraction:
    """Signed B_{2k} from the defining recurrence sum C(n+1, j) B_j = 0.

    Uses the B_1 = -1/2 convention internally; odd indices beyond 1 vanish,
    so the sum is taken over even indices plus the single B_1 correction.
    Only absolute values are exposed publicly, which makes the convention
    choice invisible to callers.
    """
    with _bernoulli_lock:
        while len(_even_bernoulli) <= k:
            m = len(_even_bernoulli)
            n = 2 * m
            acc = sum(
                Fraction(comb(n + 1, 2 * j)) * _even_bernoulli[j] for j in range(m)
            )
            acc += Fraction(-(n + 1), 2)  # C(n+1, 1) * B_1
            _even_bernoulli.append(-acc / (n + 1))
        return _even_bernoulli[k]


def bernoulli_abs_2k(k: int, cap: int = DEFAULT_INDEX_CAP) -> Fraction:
    """|B_{2k}| as an exact rational; memoized.

    Raises :class:`ResourceCapError` for k beyond ``cap`` to keep runaway
    depth requests from silently consuming unbounded time.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"index must be a positive integer, got {k!r}")
    if k > cap:
        raise ResourceCapError(f"Bernoulli index 2k = {2 * k} exceeds cap 2*{cap}")
    return abs(_bernoulli_even(k))


@dataclass(frozen=True, slots=True)
class Family:
    """One of the two even-series families, identified by its tag.

    ``c1`` is the first series coefficient (1/2 for logcos, 1/3 for
    logtan); it is also the largest exponent constant for which the
    series with perturbed leading term stays positive on all of
    (0, pi/2).
    """

    tag: str
    c1: Fraction
    description: str


LOG_COS = Family("logcos", Fraction(1, 2), "even series of -log(cos x)")
LOG_TAN_RATIO = Family("logtan", Fraction(1, 3), "even series of -log(x / tan x)")

FAMILIES = {LOG_COS.tag: LOG_COS, LOG_TAN_RATIO.tag: LOG_TAN_RATIO}


def family_from_tag(tag: str) -> Family:
    try:
        return FAMILIES[tag]
    except KeyError:
        raise ParseError(
            f"unknown family {tag!r}; expected one of {sorted(FAMILIES)}"
        ) from None


_coeff_cache: dict[tuple[str, int], Fraction] = {}


def coeff(family: Family, k: int, cap: int = DEFAULT_INDEX_CAP) -> Fraction:
    """k-th series coefficient of ``family`` as an exact rational."""
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"coefficient index must be a positive integer, got {k!r}")
    key = (family.tag, k)
    cached = _coeff_cache.get(key)
    if cached is not None:
        return cached
    b = bernoulli_abs_2k(k, cap)
    two_2k = 1 << (2 * k)
    if family.tag == LOG_COS.tag:
        scale = (two_2k >> 1) * (two_2k - 1)
    elif family.tag == LOG_TAN_RATIO.tag:
        scale = two_2k * ((two_2k >> 1) - 1)
    else:
        raise ParseError(f"unknown family {family.tag!r}")
    value = scale * b / (k * factorial(2 * k))
    _coeff_cache[key] = value
    return value


def coeff_prefix(family: Family, n: int, cap: int = DEFAULT_INDEX_CAP) -> list[Fraction]:
    """First ``n`` coefficients [coeff(family, 1), ..., coeff(family, n)]."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"prefix length must be a positive integer, got {n!r}")
    return [coeff(family, k, cap) for k in range(1, n + 1)]
