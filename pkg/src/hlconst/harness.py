"""Batch experiments: empirical ratio checks, bound scans and figure data.

Every table is a pure function of its arguments (including the seed); trials
run in a thread pool but each one derives its randomness from
``SeedSequence([seed, trial])``, so the output does not depend on how many
workers are used.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import __version__
from .bounds import (
    BoundReport,
    ScalarField,
    best_bound,
    bound_for_q,
    bound_yhb,
    bound_yu9,
    bound_yu10,
    sqrt2_exponent,
)
from .exponents import (
    INFINITY,
    as_degree,
    as_fraction,
    as_p,
    critical_exponent,
    format_fraction,
    format_p,
    lambda_profile,
    log_grid,
    upper_endpoint,
)
from .forms import (
    VERTEX_BUDGET,
    CoefficientTensor,
    Distribution,
    NormMethod,
    alternating_norm,
    mixed_norm,
    random_form,
    vertex_norm_linf,
)

HARD_TOL = 1e-9
SCAN_TOL = 1e-12


class ExponentChoice(enum.Enum):
    CRITICAL_UNIFORM = "critical"
    PROFILE = "profile"
    CUSTOM = "custom"


def default_threads() -> int:
    raw = os.environ.get("HLB_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# -- tables -----------------------------------------------------------------


def _cell(x) -> str:
    if x is None:
        return "N/A"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return format_fraction(x)
    if x is INFINITY:
        return "inf"
    if isinstance(x, enum.Enum):
        return str(x.value)
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.15g}"
    return str(x)


def _json_cell(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(f"{x:.15g}") if math.isfinite(x) else str(x)
    return _cell(x)


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]]
    meta: dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> list[Any]:
        k = self.columns.index(name)
        return [r[k] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# hlconst {__version__}\n")
        for k, v in self.meta.items():
            buf.write(f"# {k}={_cell(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(x) for x in r])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "artifact": "hlconst",
            "version": __version__,
            "meta": {k: _json_cell(v) for k, v in self.meta.items()},
            "columns": self.columns,
            "rows": [[_json_cell(x) for x in r] for r in self.rows],
        }
        return json.dumps(doc, indent=1) + "\n"


# -- ratio experiments --------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    m: int
    n: int
    p: Any
    field: ScalarField = ScalarField.REAL
    trials: int = 100
    restarts: int = 20
    seed: int = 0
    distribution: Distribution = Distribution.RADEMACHER
    exponent: ExponentChoice = ExponentChoice.CRITICAL_UNIFORM
    q: tuple[Fraction, ...] | None = None
    exact: bool = False
    tol: float = 1e-10

    def __post_init__(self):
        as_degree(self.m)
        object.__setattr__(self, "p", as_p(self.p))
        object.__setattr__(self, "field", ScalarField.parse(self.field))
        object.__setattr__(self, "distribution", Distribution.parse(self.distribution))
        object.__setattr__(self, "exponent", ExponentChoice(getattr(self.exponent, "value", self.exponent)))
        if self.n < 1 or self.trials < 1 or self.restarts < 1:
            raise ValueError("n, trials and restarts must be positive")
        if self.q is not None:
            object.__setattr__(self, "q", tuple(as_fraction(x) for x in self.q))
        if self.exponent is ExponentChoice.CUSTOM and (self.q is None or len(self.q) != self.m):
            raise ValueError(f"CUSTOM exponent needs q of length m={self.m}")

    def echo(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "n": self.n,
            "p": format_p(self.p),
            "field": self.field.value,
            "trials": self.trials,
            "restarts": self.restarts,
            "seed": self.seed,
            "distribution": self.distribution.value,
            "exponent": self.exponent.value,
            "q": "N/A" if self.q is None else ",".join(format_fraction(x) for x in self.q),
            "exact": self.exact,
        }


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    mixed_norm: float
    norm: float
    method: NormMethod | None
    converged: bool | None
    ratio: float
    bound: float
    margin: float
    error: str | None = None
    tensor: CoefficientTensor | None = field(default=None, repr=False, compare=False)

    @property
    def hard_violation(self) -> bool:
        return (
            self.method is NormMethod.VERTEX_EXACT
            and self.error is None
            and self.mixed_norm > self.bound * self.norm + HARD_TOL
        )


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    q: tuple[Fraction, ...]
    norm_p: Any
    bound: BoundReport
    records: list[TrialRecord]

    @property
    def violations(self) -> list[TrialRecord]:
        return [r for r in self.records if r.hard_violation]

    def summary(self) -> dict[str, Any]:
        ok = [r for r in self.records if r.error is None]
        margins = np.array([r.margin for r in ok]) if ok else np.array([math.nan])
        qs = np.quantile(margins, [0.0, 0.05, 0.5, 0.95, 1.0]) if ok else [math.nan] * 5
        return {
            "trials": len(self.records),
            "errors": len(self.records) - len(ok),
            "vertex_exact": sum(r.method is NormMethod.VERTEX_EXACT for r in ok),
            "alternating": sum(r.method is NormMethod.ALTERNATING for r in ok),
            "bound": self.bound.value,
            "bound_formula": self.bound.formula.value,
            "max_ratio": max((r.ratio for r in ok), default=math.nan),
            "margin_min": float(qs[0]),
            "margin_q05": float(qs[1]),
            "margin_median": float(qs[2]),
            "margin_q95": float(qs[3]),
            "margin_max": float(qs[4]),
            "hard_violations": len(self.violations),
            "soft_negative_margins": sum(
                r.method is NormMethod.ALTERNATING and r.margin < 0 for r in ok
            ),
        }

    def table(self) -> Table:
        cols = ["trial", "mixed_norm", "norm", "method", "converged", "ratio", "bound", "margin", "error"]
        rows = [
            [r.trial, r.mixed_norm, r.norm, r.method, r.converged, r.ratio, r.bound, r.margin, r.error]
            for r in self.records
        ]
        meta = {"command": "verify", **self.config.echo()}
        meta["q_used"] = ",".join(format_fraction(x) for x in self.q)
        meta["norm_p"] = format_p(self.norm_p)
        meta.update({f"summary.{k}": v for k, v in self.summary().items()})
        return Table(cols, rows, meta)


def experiment_setup(cfg: ExperimentConfig) -> tuple[tuple[Fraction, ...], Any, BoundReport]:
    """(multiple exponent, p of the norm, constant) used by every trial of `cfg`."""
    m, p, f = cfg.m, cfg.p, cfg.field
    if cfg.exponent is ExponentChoice.CRITICAL_UNIFORM:
        return (critical_exponent(m, p),) * m, p, best_bound(m, p, f)
    if cfg.exponent is ExponentChoice.PROFILE:
        prof = lambda_profile(m, p)
        q = (prof.lambda0,) + (prof.s,) * (m - 1)
        # (lambda_0, s, .., s) is an exponent for forms on l_oo.
        cands = [bound_for_q(m, INFINITY, q, f)]
        if m >= 3 and p is not INFINITY and p <= upper_endpoint(m):
            cands.append(bound_yhb(m, p, f))
        return q, INFINITY, min(cands, key=lambda b: b.value)
    return cfg.q, p, bound_for_q(m, p, cfg.q, f)


def _norm_method(cfg: ExperimentConfig, norm_p) -> NormMethod:
    vertex_ok = (
        norm_p is INFINITY
        and cfg.field is ScalarField.REAL
        and cfg.n * (cfg.m - 1) <= VERTEX_BUDGET
    )
    if cfg.exact and not vertex_ok:
        raise ValueError("--exact needs p=inf, real scalars and n(m-1) <= %d" % VERTEX_BUDGET)
    return NormMethod.VERTEX_EXACT if vertex_ok else NormMethod.ALTERNATING


def trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


def measure(T: CoefficientTensor, q, norm_p, method: NormMethod, restarts=20, seed=0, tol=1e-10):
    """(mixed norm, NormEstimate) for one tensor."""
    lhs = mixed_norm(T, q)
    if method is NormMethod.VERTEX_EXACT:
        est = vertex_norm_linf(T)
    else:
        est = alternating_norm(T, norm_p, restarts=restarts, seed=seed, tol=tol)
    return lhs, est


def _run_trial(cfg, q, norm_p, method, bound, trial) -> TrialRecord:
    s = trial_seed(cfg.seed, trial)
    T = None
    try:
        T = random_form(cfg.m, cfg.n, cfg.distribution, cfg.field, s)
        lhs, est = measure(T, q, norm_p, method, cfg.restarts, s, cfg.tol)
    except (ValueError, ArithmeticError) as exc:
        nan = math.nan
        return TrialRecord(trial, nan, nan, None, None, nan, bound, nan, f"{type(exc).__name__}: {exc}", T)
    ratio = lhs / est.value if est.value > 0 else (0.0 if lhs == 0 else math.inf)
    return TrialRecord(trial, lhs, est.value, est.method, est.converged, ratio, bound, bound - ratio, None, T)


def run_ratio_experiment(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    q, norm_p, bound = experiment_setup(cfg)
    method = _norm_method(cfg, norm_p)
    threads = default_threads() if threads is None else max(1, threads)
    work = lambda t: _run_trial(cfg, q, norm_p, method, bound.value, t)  # noqa: E731
    if threads == 1:
        records = [work(t) for t in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(work, range(cfg.trials)))
    return ExperimentResult(cfg, q, norm_p, bound, records)


# -- scans --------------------------------------------------------------------


def p_grid(m: int, points: int = 25) -> list[Fraction]:
    """Log-spaced p over [2m, 2m^3 - 4m^2 + 2m] with exact endpoints."""
    return log_grid(Fraction(2 * m), upper_endpoint(m), points)


def continuity_scan(m: int, gridpoints: int = 25, field="real") -> Table:
    m = as_degree(m, minimum=3)
    field = ScalarField.parse(field)
    top = upper_endpoint(m)
    yu10 = bound_yu10(m, field).value
    rows = []
    for p in p_grid(m, gridpoints):
        yhb = bound_yhb(m, p, field).value
        yu9 = bound_yu9(m, p, field).value
        worse = yhb > yu9 + SCAN_TOL
        endpoint_bad = p == top and abs(yhb - yu10) > SCAN_TOL * yu10
        rows.append([p, float(p), yhb, yu9, yu10, worse or endpoint_bad])
    table = Table(
        ["p_exact", "p", "yhb", "yu9", "yu10", "flag"],
        rows,
        {"command": "continuity", "m": m, "field": field.value, "points": gridpoints},
    )
    table.meta["flags"] = sum(r[-1] for r in rows)
    return table


def figure_grid(m_min: int = 3, m_max: int = 8, points: int = 25) -> Table:
    """Surface data (m, p, exponent of the endpoint constant) over each m's valid p-range."""
    as_degree(m_min, minimum=3)
    if m_max < m_min:
        raise ValueError("m_max < m_min")
    rows = []
    for m in range(m_min, m_max + 1):
        for p in p_grid(m, points):
            e = sqrt2_exponent(m, p)
            rows.append([m, float(p), float(e), p, e])
    return Table(
        ["m", "p", "sqrt2_exponent", "p_exact", "sqrt2_exponent_exact"],
        rows,
        {"command": "figure", "m_min": m_min, "m_max": m_max, "points": points},
    )


def comparison_table(m_values: Sequence[int], p_values: Sequence | None = None, field="real", points: int = 9) -> Table:
    """Rows (m, p, yu9, yhb, yu10, best, winner); formulas outside their range are N/A."""
    field = ScalarField.parse(field)
    rows = []
    for m in m_values:
        m = as_degree(m)
        top = upper_endpoint(m)
        if p_values is None:
            hi = max(2 * top, Fraction(4 * m))
            ps = log_grid(Fraction(2 * m), hi, points)
        else:
            ps = [as_p(p) for p in p_values]
        for p in ps:
            if p is not INFINITY and p < 2 * m:
                continue
            yu9 = None if p is INFINITY else bound_yu9(m, p, field).value
            in_yhb = m >= 3 and p is not INFINITY and p <= top
            yhb = bound_yhb(m, p, field).value if in_yhb else None
            yu10 = (
                bound_yu10(m, field, p).value
                if p is not INFINITY and (m == 2 or p > top)
                else None
            )
            best = best_bound(m, p, field)
            rows.append([m, p, yu9, yhb, yu10, best.value, best.formula])
    return Table(
        ["m", "p", "yu9", "yhb", "yu10", "best", "winner"],
        rows,
        {"command": "compare", "field": field.value},
    )


def optimality_probe(
    m: int,
    p=INFINITY,
    n_values: Sequence[int] = (2, 4, 6, 8),
    trials: int = 20,
    seed: int = 0,
    factors: Sequence = (Fraction(1), Fraction(9, 10)),
    restarts: int = 20,
) -> Table:
    """Mean ratio ||T||_r / ||T|| for Rademacher forms, r = factor * s.

    Exact vertex norms are used when p = oo and the budget allows; otherwise
    the ratios come from alternating (lower-bound) norms and are tagged as such.
    Reported as trend data only.
    """
    m = as_degree(m)
    p = as_p(p)
    s = critical_exponent(m, p)
    rows = []
    for n in n_values:
        exact = p is INFINITY and n * (m - 1) <= VERTEX_BUDGET
        method = NormMethod.VERTEX_EXACT if exact else NormMethod.ALTERNATING
        tensors = [random_form(m, n, "rademacher", "real", trial_seed(seed, 1000 * n + t)) for t in range(trials)]
        norms = []
        for t, T in enumerate(tensors):
            if exact:
                norms.append(vertex_norm_linf(T).value)
            else:
                norms.append(alternating_norm(T, p, restarts=restarts, seed=trial_seed(seed, t)).value)
        for fac in factors:
            r = s * as_fraction(fac)
            ratios = [mixed_norm(T, (r,) * m) / v for T, v in zip(tensors, norms)]
            rows.append([n, r, float(r), float(np.mean(ratios)), float(np.max(ratios)), method])
    return Table(
        ["n", "r_exact", "r", "mean_ratio", "max_ratio", "method"],
        rows,
        {"command": "probe", "m": m, "p": format_p(p), "trials": trials, "seed": seed},
    )
