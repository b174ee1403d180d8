"""Exact exponent calculus for the multilinear Hardy--Littlewood inequality.

Every quantity here is a :class:`fractions.Fraction`; floats are refused so
that the algebraic identities between exponents can be checked with ``==``.
The exponent ``p = oo`` is the singleton :data:`INFINITY`, never a large
number.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union


class Infinity(enum.Enum):
    INFINITY = "inf"

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"


INFINITY = Infinity.INFINITY

PExponent = Union[Fraction, Infinity]


class ExponentRangeError(ValueError):
    """An exponent lies outside the range where a formula is valid."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and exact strings (``"3/7"``, ``"1.25"``)."""
    if isinstance(value, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def as_p(value) -> PExponent:
    """Coerce a p-exponent; ``"inf"``, ``math.inf`` and INFINITY map to INFINITY."""
    if value is INFINITY:
        return INFINITY
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INFINITY
        raise TypeError("finite float exponents are not accepted; pass a Fraction or 'a/b'")
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo"):
        return INFINITY
    return as_fraction(value)


def as_degree(m: int, minimum: int = 2) -> int:
    if isinstance(m, bool) or not isinstance(m, int):
        raise TypeError("degree m must be an int")
    if m < minimum:
        raise ExponentRangeError(f"degree m={m} must be >= {minimum}")
    return m


def upper_endpoint(m: int) -> Fraction:
    """2m^3 - 4m^2 + 2m, the largest p covered by the interpolated bound."""
    return Fraction(2 * m**3 - 4 * m**2 + 2 * m)


def conjugate(r: PExponent) -> PExponent:
    """Hoelder conjugate r/(r-1); 1 and INFINITY are mutual conjugates."""
    if r is INFINITY:
        return Fraction(1)
    r = as_fraction(r)
    if r < 1:
        raise ExponentRangeError(f"conjugate undefined for r={r} < 1")
    if r == 1:
        return INFINITY
    return r / (r - 1)


def _check_p(m: int, p: PExponent) -> PExponent:
    p = as_p(p)
    if p is not INFINITY and p < 2 * m:
        raise ExponentRangeError(f"p={p} is below 2m={2 * m}")
    return p


def critical_exponent(m: int, p) -> Fraction:
    """Optimal summability exponent 2mp/(mp+p-2m); 2m/(m+1) at p = oo."""
    m = as_degree(m)
    p = _check_p(m, p)
    if p is INFINITY:
        return Fraction(2 * m, m + 1)
    return 2 * m * p / (m * p + p - 2 * m)


@dataclass(frozen=True)
class ExponentProfile:
    m: int
    p: PExponent
    s: Fraction
    lam: tuple[Fraction, ...]  # lambda_0 .. lambda_m

    @property
    def lambda0(self) -> Fraction:
        return self.lam[0]

    def holder_sum(self) -> Fraction:
        return (self.m - 1) / self.s + 1 / self.lam[0]

    def invariant_failures(self) -> list[str]:
        """Names of violated profile invariants (empty when all hold exactly)."""
        m, p, s, lam = self.m, self.p, self.s, self.lam
        bad = []
        if s != critical_exponent(m, p):
            bad.append("s formula")
        if not Fraction(2 * m, m + 1) <= s <= 2:
            bad.append("s range")
        if lam[0] != 2 * s / (m * s + s - 2 * m + 2):
            bad.append("lambda0 formula")
        if p is INFINITY:
            if lam[0] != s:
                bad.append("lambda0 == s at p=inf")
        elif not lam[0] < s:
            bad.append("lambda0 < s")
        if self.holder_sum() != Fraction(m + 1, 2):
            bad.append("hoelder identity")
        if len(lam) != m + 1:
            bad.append("chain length")
        else:
            for j in range(1, m + 1):
                want = lam[0] if p is INFINITY else lam[0] * p / (p - lam[0] * j)
                if lam[j] != want:
                    bad.append(f"lambda_{j} formula")
            if lam[m] != s:
                bad.append("lambda_m == s")
        return bad


def lambda_profile(m: int, p) -> ExponentProfile:
    m = as_degree(m)
    p = _check_p(m, p)
    s = critical_exponent(m, p)
    denom = m * s + s - 2 * m + 2
    assert denom > 0, "lambda_0 denominator vanished"
    lam0 = 2 * s / denom
    lam = [lam0]
    for j in range(1, m + 1):
        if p is INFINITY:
            lam.append(lam0)
            continue
        d = p - lam0 * j
        assert d > 0, f"lambda_{j} denominator {d} is not positive"
        lam.append(lam0 * p / d)
    return ExponentProfile(m=m, p=p, s=s, lam=tuple(lam))


def conjugate_chain_check(profile: ExponentProfile) -> bool:
    """True iff (p/lambda_j)* == lambda_{j+1}/lambda_j for j = 0..m-1."""
    p = profile.p
    if p is INFINITY:
        raise ExponentRangeError("conjugate chain needs a finite p")
    lam = profile.lam
    for j in range(profile.m):
        r = p / lam[j]
        if r <= 1 or conjugate(r) != lam[j + 1] / lam[j]:
            return False
    return True


def admissible_sum(m: int, p: PExponent) -> Fraction:
    """Required value of sum 1/q_i: (mp+p-2m)/(2p), or (m+1)/2 at p = oo."""
    if p is INFINITY:
        return Fraction(m + 1, 2)
    return (m * p + p - 2 * m) / (2 * p)


def admissible_interval(m: int, p: PExponent) -> tuple[Fraction, Fraction]:
    if p is INFINITY:
        return Fraction(1), Fraction(2)
    return p / (p - m), Fraction(2)


def check_admissible(q: Sequence, m: int, p) -> bool:
    """Exact test of sum 1/q_i = (mp+p-2m)/(2p) with every q_i in [p/(p-m), 2]."""
    p = as_p(p)
    q = [as_fraction(x) for x in q]
    if len(q) != m or any(x <= 0 for x in q):
        return False
    if p is not INFINITY and p <= m:
        return False
    lo, hi = admissible_interval(m, p)
    if any(not lo <= x <= hi for x in q):
        return False
    return sum(1 / x for x in q) == admissible_sum(m, p)


def rational_grid(lo: Fraction, hi: Fraction, points: int) -> list[Fraction]:
    """`points` equally spaced exact rationals from lo to hi inclusive."""
    if points < 2:
        raise ValueError("need at least two grid points")
    step = (hi - lo) / (points - 1)
    return [lo + k * step for k in range(points)]


def log_grid(lo: Fraction, hi: Fraction, points: int, digits: int = 6) -> list[Fraction]:
    """Log-spaced rationals with exact endpoints.

    Interior points are rounded to `digits` significant decimal digits so they
    stay short exact decimals; rounding never moves a point onto an endpoint.
    """
    if points < 2:
        raise ValueError("need at least two grid points")
    lo, hi = as_fraction(lo), as_fraction(hi)
    out = [lo]
    ratio = float(hi) / float(lo)
    for k in range(1, points - 1):
        x = float(lo) * ratio ** (k / (points - 1))
        out.append(as_fraction(f"{x:.{digits}g}"))
    out.append(hi)
    deduped = sorted(set(out))
    if deduped[0] != lo or deduped[-1] != hi:
        raise AssertionError("log grid rounding escaped the interval")
    return deduped


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_p(p: PExponent) -> str:
    return "inf" if p is INFINITY else format_fraction(p)
