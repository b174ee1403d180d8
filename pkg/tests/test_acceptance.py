"""Exit criteria. Each test records one PASS/FAIL line shown in the terminal summary."""

import time
from fractions import Fraction as F

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from hlconst.bounds import (
    COMPLEX,
    REAL,
    best_bound,
    bound_endpoint_2m,
    bound_thm765,
    bound_thm999,
    bound_yhb,
    bound_yu9,
    bound_yu10,
    max_q_threshold,
    sqrt2_exponent,
    thm765_weights,
)
from hlconst.exponents import (
    INFINITY,
    check_admissible,
    conjugate_chain_check,
    critical_exponent,
    lambda_profile,
    rational_grid,
    upper_endpoint,
)
from hlconst.forms import (
    CoefficientTensor,
    alternating_norm,
    lp_norm,
    evaluate,
    mixed_norm,
    random_form,
    vertex_norm_linf,
)
from hlconst.harness import ExperimentConfig, figure_grid, p_grid, run_ratio_experiment
from hlconst.interpolation import canonical_family, interpolate, paper_weights

pytestmark = pytest.mark.acceptance

RTOL = 1e-12
FIELDS = (REAL, COMPLEX)


def record(name, ok, detail, elapsed, limit):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] {name}: {detail} ({elapsed:.2f}s / limit {limit:g}s)")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail
    assert within, f"runtime {elapsed:.2f}s over {limit}s"


def test_c1_exact_identities():
    t0 = time.perf_counter()
    failures = []
    checked = 0
    for m in range(3, 9):
        fam = canonical_family(m)
        for p in rational_grid(F(2 * m), upper_endpoint(m), 50):
            prof = lambda_profile(m, p)
            if prof.invariant_failures():
                failures.append((m, p, prof.invariant_failures()))
            if not conjugate_chain_check(prof):
                failures.append((m, p, "conjugate chain"))
            w = paper_weights(m, p)
            if interpolate(fam, w) != (prof.lambda0,) + (prof.s,) * (m - 1):
                failures.append((m, p, "interpolation"))
            if (m - 1) * w.theta[-1] != sqrt2_exponent(m, p):
                failures.append((m, p, "sqrt2 exponent"))
            checked += 1
    record("C1 exact identity suite", not failures and checked == 300,
           f"{checked} (m,p) pairs, {len(failures)} failures", time.perf_counter() - t0, 5)


def test_c2_continuity_at_upper_endpoint():
    t0 = time.perf_counter()
    worst = 0.0
    for m in range(3, 9):
        for f in FIELDS:
            yu10 = bound_yu10(m, f).value
            worst = max(worst, abs(bound_yhb(m, upper_endpoint(m), f).value - yu10) / yu10)
    record("C2 continuity yhb(2m^3-4m^2+2m) = yu10", worst <= RTOL,
           f"max rel diff {worst:.3g}", time.perf_counter() - t0, 1)


def test_c2_paper_number_check():
    # yu10 < 1.3 m^0.36482 (real) and < m^0.21139 (complex), m = 3..8.
    t0 = time.perf_counter()
    bad = []
    for m in range(3, 9):
        if not bound_yu10(m, REAL).value < 1.3 * m**0.36482:
            bad.append(f"real m={m}")
        if not bound_yu10(m, COMPLEX).value < m**0.21139:
            bad.append(f"complex m={m}")
    record("C2 paper number check", not bad,
           "all strict" if not bad else "violated: " + ", ".join(bad), time.perf_counter() - t0, 1)


def test_c3_endpoint():
    t0 = time.perf_counter()
    worst = 0.0
    for m in range(3, 9):
        for f, base in ((REAL, np.sqrt(2)), (COMPLEX, 2 / np.sqrt(np.pi))):
            want = base ** (m - 1)
            assert bound_endpoint_2m(m, f).value == pytest.approx(want, rel=RTOL)
            worst = max(worst, abs(bound_yhb(m, 2 * m, f).value - want) / want)
    record("C3 endpoint yhb(2m) = endpoint constant^(m-1)", worst <= RTOL,
           f"max rel diff {worst:.3g}", time.perf_counter() - t0, 1)


def test_c4_improvement_over_yu9():
    t0 = time.perf_counter()
    not_better, edge = [], 0.0
    for m in range(3, 9):
        interior = p_grid(m, 27)[1:-1]
        assert len(interior) == 25
        for f in FIELDS:
            for p in interior:
                if not bound_yhb(m, p, f).value < bound_yu9(m, p, f).value:
                    not_better.append((m, p, f.value))
            a, b = bound_yhb(m, 2 * m, f).value, bound_yu9(m, 2 * m, f).value
            edge = max(edge, abs(a - b) / b)
    ok = not not_better and edge <= RTOL
    record("C4 improvement yhb < yu9 on interior", ok,
           f"{len(not_better)} non-strict points of 300; p=2m rel diff {edge:.3g}", time.perf_counter() - t0, 1)


def test_c5_theorem_continuity():
    t0 = time.perf_counter()
    worst, theta_ok = 0.0, True
    for m in range(3, 7):
        t = max_q_threshold(m)
        rest = 1 / ((F(m + 1, 2) - 1 / t) / (m - 1))
        q_at = (t,) + (rest,) * (m - 1)
        assert check_admissible(q_at, m, INFINITY) and rest <= t
        theta_ok &= thm765_weights(m, t)[1] == 1
        q_below = (critical_exponent(m, INFINITY),) * m
        for f in FIELDS:
            a = bound_thm765(m, INFINITY, q_at, f).value
            b = bound_thm999(m, INFINITY, q_below, f).value
            worst = max(worst, abs(a - b) / b)
    record("C5 theorem continuity thm765 = thm999 at threshold", theta_ok and worst <= RTOL,
           f"theta_2 == 1 exactly: {theta_ok}; max rel diff {worst:.3g}", time.perf_counter() - t0, 1)


def test_c6_hard_empirical_inequality():
    t0 = time.perf_counter()
    total, violations, worst = 0, 0, 0.0
    for m, ns in ((2, range(2, 9)), (3, range(2, 5))):
        for n in ns:
            cfg = ExperimentConfig(m=m, n=n, p=INFINITY, field=REAL, trials=500, seed=2024 + n, exact=True)
            res = run_ratio_experiment(cfg)
            assert res.q == (critical_exponent(m, INFINITY),) * m
            assert res.bound.value == best_bound(m, INFINITY, REAL).value
            s = res.summary()
            assert s["vertex_exact"] == 500
            total += s["trials"]
            violations += s["hard_violations"]
            worst = max(worst, s["max_ratio"] / s["bound"])
    record("C6 hard empirical inequality (vertex-exact norms)", violations == 0,
           f"{total} trials, {violations} violations, max ratio/bound {worst:.4f}", time.perf_counter() - t0, 120)


def test_c7_oracle_equivalence():
    t0 = time.perf_counter()
    svd_err = 0.0
    for t in range(100):
        T = random_form(2, 6, "gaussian", "real", seed=7000 + t)
        est = alternating_norm(T, 2, restarts=20, seed=t)
        svd_err = max(svd_err, abs(est.value - np.linalg.svd(T.entries, compute_uv=False)[0]))
    matches, over = 0, 0.0
    for t in range(200):
        n = 2 + t % 5
        T = random_form(2, n, "rademacher", "real", seed=9000 + t)
        exact = vertex_norm_linf(T).value
        est = alternating_norm(T, INFINITY, restarts=50, seed=t).value
        matches += abs(est - exact) <= 1e-10 * max(1.0, exact)
        over = max(over, est - exact)
    rate = matches / 200
    ok = svd_err <= 1e-8 and rate >= 0.95 and over <= 1e-10
    record("C7 oracle equivalence", ok,
           f"max |alt - sigma_1| {svd_err:.2g}; vertex match rate {rate:.3f}; max excess {over:.2g}",
           time.perf_counter() - t0, 60)


def test_c8_property_suite():
    t0 = time.perf_counter()
    problems = []
    rng = np.random.default_rng(88)
    for trial in range(20):
        m = 2 + trial % 3
        T = random_form(m, 3, "gaussian", "real" if trial % 2 else "complex", seed=trial)
        q = tuple(F(int(x), 100) for x in rng.integers(100, 201, size=m))
        p = [F(6), F(12), INFINITY][trial % 3]
        base_mixed = mixed_norm(T, q)
        base_norm = alternating_norm(T, p, restarts=4, seed=trial)
        for c in (2, -3, F(1, 7)):
            cT = T.scaled(float(c))
            if abs(mixed_norm(cT, q) - abs(float(c)) * base_mixed) > 1e-10 * abs(float(c)) * base_mixed:
                problems.append(("mixed homogeneity", trial, c))
            v = alternating_norm(cT, p, restarts=4, seed=trial).value
            if abs(v - abs(float(c)) * base_norm.value) > 1e-10 * abs(float(c)) * base_norm.value:
                problems.append(("norm homogeneity", trial, c))
        flat = float((np.abs(T.entries) ** float(q[0])).sum() ** (1 / float(q[0])))
        if abs(mixed_norm(T, (q[0],) * m) - flat) > 1e-12 * flat:
            problems.append(("uniform collapse", trial))
        for trace in base_norm.traces:
            if any(b < a for a, b in zip(trace, trace[1:])):
                problems.append(("monotone ascent", trial))
        for x in base_norm.witness:
            if lp_norm(x, p) > 1 + 1e-12:
                problems.append(("witness feasibility", trial))
        if abs(abs(evaluate(T, base_norm.witness)) - base_norm.value) > 1e-10 * base_norm.value:
            problems.append(("witness value", trial))
        atom = np.zeros((3,) * m, dtype=complex)
        atom[(trial % 3,) * m] = 2.5 - 1j
        A = CoefficientTensor(atom, "complex")
        if abs(mixed_norm(A, q) - abs(2.5 - 1j)) > 1e-12:
            problems.append(("single atom", trial))
    cfg = ExperimentConfig(m=3, n=3, p=9, trials=16, restarts=4, seed=3)
    if run_ratio_experiment(cfg, threads=1).table().to_csv() != run_ratio_experiment(cfg, threads=4).table().to_csv():
        problems.append(("determinism under parallelism",))
    record("C8 property suite", not problems,
           f"{len(problems)} property violations", time.perf_counter() - t0, 30)


def test_c9_figure_reproduction():
    t0 = time.perf_counter()
    table = figure_grid(3, 8, 25)
    bad = []
    for m in range(3, 9):
        rows = [r for r in table.rows if r[0] == m]
        ex = [r[4] for r in rows]
        if not (isinstance(ex[0], F) and ex[0] == m - 1 and ex[-1] == 0):
            bad.append(f"boundary m={m}")
        if not all(a > b for a, b in zip(ex, ex[1:])):
            bad.append(f"not decreasing m={m}")
    csv_text = table.to_csv()
    ok = not bad and csv_text == figure_grid(3, 8, 25).to_csv()
    record("C9 figure grid", ok, f"{len(table.rows)} rows; issues: {bad or 'none'}", time.perf_counter() - t0, 1)
