"""Upper bounds for Hardy--Littlewood and Bohnenblust--Hille constants.

Exponents are kept exact until the single float power at the end. Factor
pairing follows the usual convention: sqrt(2) and 1.3*m**((2-log2-gamma)/2)
belong to real scalars, 2/sqrt(pi) and m**((1-gamma)/2) to complex ones.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exponents import (
    INFINITY,
    ExponentRangeError,
    PExponent,
    as_degree,
    as_fraction,
    as_p,
    check_admissible,
    critical_exponent,
    upper_endpoint,
)
from .interpolation import paper_weights

EULER_GAMMA = 0.5772156649015329
SQRT2 = math.sqrt(2.0)
TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
REAL_BH_EXPONENT = (2.0 - math.log(2.0) - EULER_GAMMA) / 2.0
COMPLEX_BH_EXPONENT = (1.0 - EULER_GAMMA) / 2.0

# Rounded exponents as printed next to the exact ones; strict upper bounds.
REAL_BH_EXPONENT_ROUNDED = 0.36482
COMPLEX_BH_EXPONENT_ROUNDED = 0.21139

FACTOR_RTOL = 1e-12


class ScalarField(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @classmethod
    def parse(cls, value: Union[str, "ScalarField"]) -> "ScalarField":
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


REAL = ScalarField.REAL
COMPLEX = ScalarField.COMPLEX


class Formula(enum.Enum):
    YU9 = "YU9"
    YU10 = "YU10"
    YHB = "YHB"
    BH_BASELINE = "BH_BASELINE"
    ENDPOINT_2M = "ENDPOINT_2M"
    THM999 = "THM999"
    THM765 = "THM765"


class HypothesisError(ExponentRangeError):
    """A theorem's hypothesis does not hold for the requested parameters."""


@dataclass(frozen=True)
class Factor:
    name: str
    base: float
    exponent: float
    exact_exponent: Fraction | None = None

    @property
    def value(self) -> float:
        return self.base**self.exponent


@dataclass(frozen=True)
class BoundReport:
    m: int
    p: PExponent
    field: ScalarField
    value: float
    formula: Formula
    factors: tuple[Factor, ...]

    def __post_init__(self):
        prod = math.prod(f.value for f in self.factors)
        if abs(prod - self.value) > FACTOR_RTOL * abs(self.value):
            raise AssertionError(f"factors give {prod}, value is {self.value}")
        if self.value < 1.0 - FACTOR_RTOL:
            raise AssertionError(f"constant bound {self.value} < 1")


def _report(m, p, field, formula, factors) -> BoundReport:
    factors = tuple(factors)
    value = math.prod(f.value for f in factors)
    return BoundReport(m=m, p=p, field=field, value=value, formula=formula, factors=factors)


def bh_baseline_value(m: int, field: ScalarField) -> float:
    if field is REAL:
        return 1.3 * m**REAL_BH_EXPONENT
    return m**COMPLEX_BH_EXPONENT


def endpoint_base(field: ScalarField) -> float:
    return SQRT2 if field is REAL else TWO_OVER_SQRT_PI


def _bh_factor(m, field, exact_exponent) -> Factor:
    return Factor(
        name=f"BH_{field.value}(m={m})",
        base=bh_baseline_value(m, field),
        exponent=float(exact_exponent),
        exact_exponent=Fraction(exact_exponent),
    )


def _endpoint_factor(field, exact_exponent) -> Factor:
    return Factor(
        name="sqrt2" if field is REAL else "2/sqrt(pi)",
        base=endpoint_base(field),
        exponent=float(exact_exponent),
        exact_exponent=Fraction(exact_exponent),
    )


def _finite_p(m: int, p) -> Fraction:
    p = as_p(p)
    if p is INFINITY:
        raise ExponentRangeError("this formula needs a finite p")
    if p < 2 * m:
        raise ExponentRangeError(f"p={p} is below 2m={2 * m}")
    return p


def bound_bh_baseline(m: int, field) -> BoundReport:
    m = as_degree(m)
    field = ScalarField.parse(field)
    return _report(m, INFINITY, field, Formula.BH_BASELINE, [_bh_factor(m, field, 1)])


def bound_endpoint_2m(m: int, field) -> BoundReport:
    """Constant for the multiple exponent (1, 2, ..., 2): sqrt(2)^(m-1) or (2/sqrt(pi))^(m-1)."""
    m = as_degree(m)
    field = ScalarField.parse(field)
    return _report(m, Fraction(2 * m), field, Formula.ENDPOINT_2M, [_endpoint_factor(field, m - 1)])


def bound_yu9(m: int, p, field) -> BoundReport:
    m = as_degree(m)
    p = _finite_p(m, p)
    field = ScalarField.parse(field)
    return _report(
        m,
        p,
        field,
        Formula.YU9,
        [_endpoint_factor(field, 2 * m * (m - 1) / p), _bh_factor(m, field, (p - 2 * m) / p)],
    )


def bound_yu10(m: int, field, p=None) -> BoundReport:
    """p-independent bound valid above 2m^3 - 4m^2 + 2m (and for every p when m = 2)."""
    m = as_degree(m)
    field = ScalarField.parse(field)
    p = INFINITY if p is None else as_p(p)
    return _report(m, p, field, Formula.YU10, [_bh_factor(m, field, 1)])


def sqrt2_exponent(m: int, p) -> Fraction:
    """Exponent of the endpoint constant in the interpolated bound."""
    m = as_degree(m, minimum=3)
    p = _finite_p(m, p)
    top = upper_endpoint(m)
    if p > top:
        raise ExponentRangeError(f"p={p} above {top} for m={m}")
    return (p - 2 * m - m * p + 6 * m**2 - 6 * m**3 + 2 * m**4) / (m * p * (m - 2))


def yhb_exponents(m: int, p) -> tuple[Fraction, Fraction]:
    """(exponent of the BH factor, exponent of the endpoint factor)."""
    theta = paper_weights(m, p).theta
    return (m - 1) * theta[0], sqrt2_exponent(m, p)


def bound_yhb(m: int, p, field) -> BoundReport:
    m = as_degree(m)
    if m == 2:
        raise ExponentRangeError("m=2 is covered by bound_yu10")
    p = _finite_p(m, p)
    field = ScalarField.parse(field)
    bh_exp, end_exp = yhb_exponents(m, p)
    return _report(
        m, p, field, Formula.YHB, [_bh_factor(m, field, bh_exp), _endpoint_factor(field, end_exp)]
    )


def max_q_threshold(m: int) -> Fraction:
    """(2m^2 - 4m + 2)/(m^2 - m - 1), the split between the two generalized theorems."""
    return Fraction(2 * m * m - 4 * m + 2, m * m - m - 1)


def _check_q(q, m, p):
    q = tuple(as_fraction(x) for x in q)
    if not check_admissible(q, m, p):
        raise HypothesisError(
            f"q={tuple(str(x) for x in q)} is not admissible for m={m}, p={p}: "
            "need sum 1/q_i = (mp+p-2m)/(2p) and q_i in [p/(p-m), 2]"
        )
    return q


def bound_thm999(m: int, p, q: Sequence, field) -> BoundReport:
    m = as_degree(m)
    p = as_p(p)
    field = ScalarField.parse(field)
    if p is not INFINITY and not p > 2 * m:
        raise HypothesisError(f"need p > 2m, got p={p}")
    q = _check_q(q, m, p)
    if not max(q) < max_q_threshold(m):
        raise HypothesisError(
            f"need max q_i < {max_q_threshold(m)}, got {max(q)}; use bound_thm765"
        )
    return _report(m, p, field, Formula.THM999, [_bh_factor(m, field, 1)])


def thm765_weights(m: int, qmax) -> tuple[Fraction, Fraction]:
    qmax = as_fraction(qmax)
    if m == 2:
        return Fraction(1), Fraction(0)
    theta2 = Fraction((m + 1) * (m - 1) ** 2) * (2 - qmax) / ((m * m - m - 2) * qmax)
    return 1 - theta2, theta2


def bound_thm765(m: int, p, q: Sequence, field) -> BoundReport:
    m = as_degree(m)
    p = as_p(p)
    field = ScalarField.parse(field)
    if p is not INFINITY and p < 2 * m:
        raise HypothesisError(f"need p >= 2m, got p={p}")
    q = _check_q(q, m, p)
    if not max(q) >= max_q_threshold(m):
        raise HypothesisError(
            f"need max q_i >= {max_q_threshold(m)}, got {max(q)}; use bound_thm999"
        )
    theta1, theta2 = thm765_weights(m, max(q))
    return _report(
        m,
        p,
        field,
        Formula.THM765,
        [_endpoint_factor(field, (m - 1) * theta1), _bh_factor(m, field, theta2)],
    )


def bound_for_q(m: int, p, q: Sequence, field) -> BoundReport:
    """Route a multiple exponent to whichever generalized theorem covers it."""
    m = as_degree(m)
    p = as_p(p)
    q = _check_q(q, m, p)
    if max(q) < max_q_threshold(m) and (p is INFINITY or p > 2 * m):
        return bound_thm999(m, p, q, field)
    return bound_thm765(m, p, q, field)


_PRIORITY = {Formula.YHB: 0, Formula.YU10: 1, Formula.YU9: 2, Formula.BH_BASELINE: 3}


def applicable_bounds(m: int, p, field) -> list[BoundReport]:
    m = as_degree(m)
    p = as_p(p)
    field = ScalarField.parse(field)
    if p is INFINITY:
        return [bound_bh_baseline(m, field)]
    if p < 2 * m:
        raise ExponentRangeError(f"p={p} is below 2m={2 * m}")
    out = []
    top = upper_endpoint(m)
    if m >= 3 and p <= top:
        out.append(bound_yhb(m, p, field))
    out.append(bound_yu9(m, p, field))
    if m == 2 or p > top:
        out.append(bound_yu10(m, field, p))
    return out


def best_bound(m: int, p, field) -> BoundReport:
    """Smallest applicable published bound; near-ties (1e-12 rel) go to YHB, then YU10, then YU9."""
    cands = applicable_bounds(m, p, field)
    low = min(b.value for b in cands)
    ties = [b for b in cands if b.value - low <= FACTOR_RTOL * low]
    return min(ties, key=lambda b: _PRIORITY[b.formula])


def critical_q(m: int, p) -> tuple[Fraction, ...]:
    return (critical_exponent(m, p),) * m
