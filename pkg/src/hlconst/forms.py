"""Finite m-linear forms on l_p^n.

A form is stored as its dense coefficient tensor ``T[j1, ..., jm]``.  The
left side of the Hardy--Littlewood inequality is :func:`mixed_norm`; the
right side needs the operator norm, which :func:`alternating_norm` bounds
from below and :func:`vertex_norm_linf` computes exactly for real forms on
l_oo^n.
"""

from __future__ import annotations

import enum
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .bounds import ScalarField
from .exponents import INFINITY

VERTEX_BUDGET = 24  # max n*(m-1) for exhaustive sign enumeration
_CHUNK_ELEMENTS = 1 << 22


class Distribution(enum.Enum):
    RADEMACHER = "rademacher"
    GAUSSIAN = "gaussian"

    @classmethod
    def parse(cls, value) -> "Distribution":
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


class NormMethod(enum.Enum):
    ALTERNATING = "ALTERNATING"
    VERTEX_EXACT = "VERTEX_EXACT"


class BudgetError(ValueError):
    """The exact vertex enumeration would be too large."""


@dataclass(frozen=True, eq=False)
class CoefficientTensor:
    entries: np.ndarray
    field: ScalarField = ScalarField.REAL
    distribution: str | None = None
    seed: int | None = None

    def __post_init__(self):
        field_ = ScalarField.parse(self.field)
        arr = np.array(self.entries, dtype=complex if field_ is ScalarField.COMPLEX else None)
        if field_ is ScalarField.REAL:
            if np.iscomplexobj(arr):
                raise ValueError("complex entries in a REAL tensor")
            arr = arr.astype(float)
        if arr.ndim < 1 or len(set(arr.shape)) != 1:
            raise ValueError(f"coefficient tensor must be n x ... x n, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficient tensor has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "field", field_)

    @property
    def m(self) -> int:
        return self.entries.ndim

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def scaled(self, c) -> "CoefficientTensor":
        return CoefficientTensor(self.entries * c, self.field)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    witness: tuple[np.ndarray, ...]
    restarts: int
    converged: bool
    method: NormMethod
    traces: tuple[tuple[float, ...], ...] = field(default=(), repr=False)


def _p_float(p) -> float:
    if p is INFINITY:
        return math.inf
    if isinstance(p, str):
        return math.inf if p.strip().lower() in ("inf", "infinity") else float(Fraction(p))
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p={p} must be >= 1")
    return p


def lp_norm(x: np.ndarray, p) -> float:
    p = _p_float(p)
    a = np.abs(np.asarray(x)).ravel()
    if a.size == 0:
        return 0.0
    top = a.max()
    if top == 0 or math.isinf(p):
        return float(top)
    return float(top * np.sum((a / top) ** p) ** (1.0 / p))


def dual_exponent(p) -> float:
    p = _p_float(p)
    if math.isinf(p):
        return 1.0
    if p == 1:
        return math.inf
    return p / (p - 1)


def evaluate(T: CoefficientTensor, xs: Sequence[np.ndarray]):
    """T(x_1, ..., x_m) by successive contraction of the last axis."""
    if len(xs) != T.m:
        raise ValueError(f"{len(xs)} arguments for a {T.m}-linear form")
    acc = T.entries
    for x in reversed(xs):
        x = np.asarray(x)
        if x.shape != (T.n,):
            raise ValueError(f"argument of shape {x.shape}, expected ({T.n},)")
        acc = acc @ x
    return acc.item() if T.field is ScalarField.COMPLEX else float(acc)


def partial_functional(T: CoefficientTensor, xs: Sequence[np.ndarray], i: int) -> np.ndarray:
    """Coefficients of the linear map x -> T(x_1, .., x_{i-1}, x, x_{i+1}, .., x_m)."""
    acc = T.entries
    for k in reversed(range(T.m)):
        if k != i:
            acc = np.tensordot(acc, xs[k], axes=([k], [0]))
    return acc


def mixed_norm(T: CoefficientTensor, q: Sequence) -> float:
    """Nested norm: l_{q_m} over j_m innermost, ..., l_{q_1} over j_1 outermost."""
    if len(q) != T.m:
        raise ValueError(f"{len(q)} exponents for a {T.m}-linear form")
    exps = [_p_float(r) for r in q]
    acc = np.abs(T.entries)
    top = acc.max() if acc.size else 0.0
    if top == 0:
        return 0.0
    acc = acc / top
    for r in reversed(exps):
        if math.isinf(r):
            acc = acc.max(axis=-1)
        else:
            acc = np.sum(acc**r, axis=-1) ** (1.0 / r)
    return float(top * acc)


def _phase(a: np.ndarray) -> np.ndarray:
    """Unit scalars u with u*a = |a|; 1 where a == 0."""
    mag = np.abs(a)
    if np.iscomplexobj(a):
        out = np.ones_like(a)
        nz = mag > 0
        out[nz] = np.conj(a[nz]) / mag[nz]
        return out
    return np.where(a < 0, -1.0, 1.0)


def dual_argmax(a: np.ndarray, p) -> np.ndarray:
    """Maximizer of |<a, x>| over the unit l_p ball; <a, x> = ||a||_{p*} >= 0."""
    a = np.asarray(a)
    mag = np.abs(a)
    top = mag.max() if mag.size else 0.0
    if top == 0:
        raise ValueError("dual_argmax of the zero functional")
    p = _p_float(p)
    u = _phase(a)
    if math.isinf(p):
        return u
    if p == 1:
        x = np.zeros_like(u)
        k = int(np.argmax(mag))
        x[k] = u[k]
        return x
    q = p / (p - 1)
    b = mag / top
    w = b ** (q - 1)
    return u * (w / lp_norm(w, p))


def _random_start(rng: np.random.Generator, n: int, p, complex_: bool) -> np.ndarray:
    x = rng.standard_normal(n)
    if complex_:
        x = x + 1j * rng.standard_normal(n)
    return x / lp_norm(x, p)


def _ascent(T, p, rng, tol, max_sweeps):
    cplx = T.field is ScalarField.COMPLEX
    xs = [_random_start(rng, T.n, p, cplx) for _ in range(T.m)]
    value = abs(evaluate(T, xs))
    trace = [value]
    converged = False
    for _ in range(max_sweeps):
        start = value
        for i in range(T.m):
            a = partial_functional(T, xs, i)
            if not np.any(a):
                continue
            xs[i] = dual_argmax(a, p)
            new = abs(evaluate(T, xs))
            if new < value * (1 - 1e-12):
                raise AssertionError(f"ascent decreased: {value} -> {new}")
            value = max(value, new)
            trace.append(value)
        if value - start <= tol * value:
            converged = True
            break
    return value, tuple(xs), converged, tuple(trace)


def alternating_norm(
    T: CoefficientTensor,
    p,
    restarts: int = 10,
    seed: int = 0,
    tol: float = 1e-10,
    max_sweeps: int = 500,
) -> NormEstimate:
    """Multi-start block-coordinate ascent; always a lower bound on ||T||.

    Start ``r`` draws from ``SeedSequence([seed, r])`` so that each start is
    reproducible on its own.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best = None
    traces = []
    for r in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, r]))
        run = _ascent(T, p, rng, tol, max_sweeps)
        traces.append(run[3])
        if best is None or run[0] > best[0]:
            best = run
    value, witness, converged, _ = best
    return NormEstimate(
        value=value,
        witness=witness,
        restarts=restarts,
        converged=converged,
        method=NormMethod.ALTERNATING,
        traces=tuple(traces),
    )


def sign_vertices(n: int, first_positive: bool = False) -> np.ndarray:
    """All vectors in {-1, 1}^n as rows (optionally only those with x[0] = 1)."""
    rows = np.array(list(itertools.product((1.0, -1.0), repeat=n))).reshape(-1, n)
    if first_positive:
        rows = rows[rows[:, 0] > 0]
    return rows


def vertex_norm_linf(T: CoefficientTensor) -> NormEstimate:
    """Exact norm of a real form on l_oo^n.

    |T| is maximized over vertices of the cube; the last argument is solved in
    closed form (an l_1 norm), and x_1[0] = 1 by sign symmetry.
    """
    if T.field is not ScalarField.REAL:
        raise ValueError("vertex enumeration needs a REAL form")
    m, n = T.m, T.n
    if n * (m - 1) > VERTEX_BUDGET:
        raise BudgetError(f"n(m-1) = {n * (m - 1)} exceeds the budget {VERTEX_BUDGET}")
    if m == 1:
        x = np.where(T.entries < 0, -1.0, 1.0)
        return NormEstimate(float(np.abs(T.entries).sum()), (x,), 1, True, NormMethod.VERTEX_EXACT)

    first = sign_vertices(n, first_positive=True)
    if m == 2:
        vals = np.abs(first @ T.entries).sum(axis=1)
        k = int(np.argmax(vals))
        head = (first[k],)
    else:
        full = sign_vertices(n)
        best_val, head = -1.0, None
        # Arguments 2..m-2 enumerated explicitly, argument 1 in chunks, m-1 batched.
        for combo in itertools.product(range(len(full)), repeat=m - 3):
            C = T.entries
            for k in reversed(range(m - 3)):
                C = np.tensordot(C, full[combo[k]], axes=([k + 1], [0]))
            chunk = max(1, _CHUNK_ELEMENTS // (len(full) * n))
            for lo in range(0, len(first), chunk):
                D = np.tensordot(first[lo : lo + chunk], C, axes=([1], [0]))
                E = np.einsum("vb,cbd->cvd", full, D)
                vals = np.abs(E).sum(axis=2)
                c, v = np.unravel_index(int(np.argmax(vals)), vals.shape)
                if vals[c, v] > best_val:
                    best_val = float(vals[c, v])
                    head = (first[lo + c],) + tuple(full[i] for i in combo) + (full[v],)
    xs = list(head) + [np.ones(n)]
    last = partial_functional(T, xs, m - 1)
    xs[-1] = np.where(last < 0, -1.0, 1.0)
    value = abs(evaluate(T, xs))
    return NormEstimate(value, tuple(xs), 1, True, NormMethod.VERTEX_EXACT)


def random_form(m: int, n: int, distribution="rademacher", field="real", seed: int = 0) -> CoefficientTensor:
    dist = Distribution.parse(distribution)
    field_ = ScalarField.parse(field)
    rng = np.random.default_rng(seed)
    shape = (n,) * m

    def draw():
        if dist is Distribution.RADEMACHER:
            return rng.integers(0, 2, size=shape) * 2.0 - 1.0
        return rng.standard_normal(shape)

    if field_ is ScalarField.REAL:
        entries = draw()
    else:
        re = draw()
        entries = (re + 1j * draw()) / math.sqrt(2.0)
    return CoefficientTensor(entries, field_, dist.value, seed)


# -- tensor text format -----------------------------------------------------
# Header "m n field distribution seed", then n^m entries in row-major order.


def _fmt_scalar(z, cplx: bool) -> str:
    if not cplx:
        return repr(float(z))
    re, im = float(z.real), float(z.imag)
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{re!r}{sign}{abs(im)!r}i"


def _parse_scalar(tok: str, cplx: bool):
    if not cplx:
        return float(tok)
    if not tok.endswith("i"):
        return complex(float(tok), 0.0)
    return complex(tok[:-1] + "j")


def dumps_tensor(T: CoefficientTensor) -> str:
    cplx = T.field is ScalarField.COMPLEX
    dist = T.distribution or "none"
    seed = "none" if T.seed is None else str(T.seed)
    lines = [f"{T.m} {T.n} {T.field.value} {dist} {seed}"]
    lines.extend(_fmt_scalar(z, cplx) for z in T.entries.ravel(order="C"))
    return "\n".join(lines) + "\n"


def loads_tensor(text: str) -> CoefficientTensor:
    tokens = text.split()
    if len(tokens) < 5:
        raise ValueError("tensor file header needs 'm n field distribution seed'")
    m, n = int(tokens[0]), int(tokens[1])
    field_ = ScalarField.parse(tokens[2])
    dist = None if tokens[3] == "none" else tokens[3]
    seed = None if tokens[4] == "none" else int(tokens[4])
    body = tokens[5:]
    if len(body) != n**m:
        raise ValueError(f"expected {n ** m} entries, found {len(body)}")
    cplx = field_ is ScalarField.COMPLEX
    vals = [_parse_scalar(t, cplx) for t in body]
    arr = np.array(vals, dtype=complex if cplx else float).reshape((n,) * m)
    return CoefficientTensor(arr, field_, dist, seed)


def write_tensor(T: CoefficientTensor, fh: io.TextIOBase) -> None:
    fh.write(dumps_tensor(T))


def read_tensor(fh: Iterable[str]) -> CoefficientTensor:
    return loads_tensor("".join(fh))
