"""Interpolation of multiple exponents.

A multiple exponent ``q`` is interpolated from a family ``E_1..E_k`` with
convex weights ``theta`` by the coordinatewise rule

    1/q_j = sum_k theta_k / E_{k,j},

and the associated constants combine as ``prod_k C_k ** theta_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exponents import (
    INFINITY,
    ExponentRangeError,
    as_degree,
    as_fraction,
    as_p,
    upper_endpoint,
)

MultipleExponent = tuple[Fraction, ...]


class SingularSystemError(ArithmeticError):
    """The weights are not uniquely determined by the target."""


class NotInSpanError(ArithmeticError):
    """No weight vector reproduces the target exponent."""


@dataclass(frozen=True)
class ExponentFamily:
    members: tuple[MultipleExponent, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("exponent family is empty")
        width = len(self.members[0])
        if any(len(e) != width for e in self.members):
            raise ValueError("family members have different lengths")

    @classmethod
    def of(cls, members: Sequence[Sequence]) -> "ExponentFamily":
        return cls(tuple(tuple(as_fraction(x) for x in e) for e in members))

    @property
    def width(self) -> int:
        return len(self.members[0])

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, k: int) -> MultipleExponent:
        return self.members[k]


@dataclass(frozen=True)
class WeightVector:
    theta: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.theta:
            raise ValueError("empty weight vector")
        if any(t < 0 for t in self.theta):
            raise ValueError(f"negative weight in {self.theta}")
        if sum(self.theta) != 1:
            raise ValueError(f"weights sum to {sum(self.theta)}, not 1")

    @classmethod
    def of(cls, theta: Sequence) -> "WeightVector":
        return cls(tuple(as_fraction(t) for t in theta))

    def __len__(self) -> int:
        return len(self.theta)


def canonical_family(m: int) -> ExponentFamily:
    """E_1..E_{m-1} carry a single 2 (E_i at index m-i) among (2m-2)/m; E_m = (1,2,..,2)."""
    m = as_degree(m, minimum=3)
    base = Fraction(2 * m - 2, m)
    members = []
    for i in range(1, m):
        e = [base] * m
        e[m - i] = Fraction(2)
        members.append(tuple(e))
    members.append((Fraction(1),) + (Fraction(2),) * (m - 1))
    return ExponentFamily(tuple(members))


def interpolate(family: ExponentFamily, weights: WeightVector) -> MultipleExponent:
    if len(weights) != len(family):
        raise ValueError(f"{len(weights)} weights for {len(family)} family members")
    out = []
    for j in range(family.width):
        recip = sum(t / e[j] for t, e in zip(weights.theta, family.members))
        out.append(1 / recip)
    return tuple(out)


def paper_weights(m: int, p) -> WeightVector:
    """Weights (theta_1,..,theta_1, theta_m) that carry E_1..E_m onto (lambda_0, s,..,s).

    theta_1 = (2m - p + mp - 2m^2)/(m^2 p - 2mp) and theta_m = 1 - (m-1) theta_1,
    valid for 2m <= p <= 2m^3 - 4m^2 + 2m.
    """
    m = as_degree(m, minimum=3)
    p = as_p(p)
    top = upper_endpoint(m)
    if p is INFINITY or not 2 * m <= p <= top:
        raise ExponentRangeError(f"p={p} outside [{2 * m}, {top}] for m={m}")
    return WeightVector(_raw_weights(m, p))


def _raw_weights(m: int, p: Fraction) -> tuple[Fraction, ...]:
    # No range check; used to probe behaviour past the endpoints.
    theta1 = (2 * m - p + m * p - 2 * m * m) / (m * m * p - 2 * m * p)
    return (theta1,) * (m - 1) + (1 - (m - 1) * theta1,)


def _bit_size(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


def solve_weights(target: Sequence, family: ExponentFamily) -> tuple[Fraction, ...]:
    """Exact theta with interpolate(family, theta) == target and sum(theta) == 1.

    The result may have entries outside [0, 1]; wrap it in WeightVector to
    insist on convexity.
    """
    target = [as_fraction(x) for x in target]
    k, width = len(family), family.width
    if len(target) != width:
        raise ValueError(f"target has length {len(target)}, family width is {width}")
    # Rows: one per coordinate (reciprocal equations) plus the sum-to-one row.
    rows = [[1 / e[j] for e in family.members] + [1 / target[j]] for j in range(width)]
    rows.append([Fraction(1)] * k + [Fraction(1)])

    r = 0
    for c in range(k):
        candidates = [i for i in range(r, len(rows)) if rows[i][c] != 0]
        if not candidates:
            raise SingularSystemError(f"no unique solution: column {c} has no pivot")
        best = min(candidates, key=lambda i: (_bit_size(rows[i][c]), i))
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    for i in range(r, len(rows)):
        if rows[i][k] != 0:
            raise NotInSpanError("target not in span of the family")
    return tuple(rows[i][k] for i in range(k))
