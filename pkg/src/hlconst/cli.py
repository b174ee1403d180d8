"""Command-line front end.

Exit codes: 0 success, 2 usage or range error, 3 hard violation found by
``verify``.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .bounds import (
    BoundReport,
    Formula,
    ScalarField,
    best_bound,
    bound_bh_baseline,
    bound_endpoint_2m,
    bound_for_q,
    bound_thm765,
    bound_thm999,
    bound_yhb,
    bound_yu9,
    bound_yu10,
)
from .exponents import (
    INFINITY,
    ExponentRangeError,
    as_fraction,
    as_p,
    check_admissible,
    conjugate_chain_check,
    format_fraction,
    format_p,
    lambda_profile,
    upper_endpoint,
)
from .forms import dumps_tensor
from .harness import (
    ExperimentConfig,
    comparison_table,
    figure_grid,
    optimality_probe,
    run_ratio_experiment,
)
from .interpolation import canonical_family, interpolate, paper_weights, solve_weights

EXIT_USAGE = 2
EXIT_VIOLATION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _frac(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _pexp(text: str):
    try:
        return as_p(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a p-exponent (a/b, decimal or inf): {text!r}") from exc


def _qvec(text: str) -> tuple[Fraction, ...]:
    return tuple(_frac(t) for t in text.split(","))


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",")]


def _dec(x: Fraction) -> str:
    return f"{float(x):.15g}"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(table, fmt: str) -> str:
    return table.to_json() if fmt == "json" else table.to_csv()


# -- commands ---------------------------------------------------------------


def cmd_exponent(args) -> int:
    prof = lambda_profile(args.m, args.p)
    lines = [f"m = {prof.m}", f"p = {format_p(prof.p)}", f"s = {format_fraction(prof.s)} ({_dec(prof.s)})"]
    for j, lam in enumerate(prof.lam):
        lines.append(f"lambda_{j} = {format_fraction(lam)} ({_dec(lam)})")
    hs = prof.holder_sum()
    ok = hs == Fraction(prof.m + 1, 2)
    lines.append(
        f"(m-1)/s + 1/lambda_0 = {format_fraction(hs)}; (m+1)/2 = {format_fraction(Fraction(prof.m + 1, 2))}: "
        + ("identity OK" if ok else "identity FAILED")
    )
    if prof.p is not INFINITY:
        chain = conjugate_chain_check(prof)
        lines.append("conjugate chain (p/lambda_j)* = lambda_{j+1}/lambda_j: " + ("OK" if chain else "FAILED"))
    bad = prof.invariant_failures()
    lines.append("profile invariants: " + ("OK" if not bad else "FAILED " + ", ".join(bad)))
    print("\n".join(lines))
    return 0


def cmd_interpolate(args) -> int:
    fam = canonical_family(args.m)
    w = paper_weights(args.m, args.p)
    q = interpolate(fam, w)
    prof = lambda_profile(args.m, args.p)
    target = (prof.lambda0,) + (prof.s,) * (args.m - 1)
    lines = [f"m = {args.m}", f"p = {format_p(args.p)}"]
    for k, e in enumerate(fam.members, 1):
        lines.append(f"E_{k} = ({', '.join(format_fraction(x) for x in e)})  theta_{k} = {format_fraction(w.theta[k - 1])}")
    lines.append(f"interpolated = ({', '.join(format_fraction(x) for x in q)})")
    lines.append("matches (lambda_0, s, ..., s): " + ("OK" if q == target else "FAILED"))
    solved = solve_weights(target, fam)
    lines.append("solved weights agree: " + ("OK" if solved == w.theta else "FAILED"))
    lines.append("admissible for p=inf: " + ("OK" if check_admissible(q, args.m, INFINITY) else "FAILED"))
    print("\n".join(lines))
    return 0


def _format_report(r: BoundReport) -> str:
    lines = [
        f"formula = {r.formula.value}",
        f"m = {r.m}",
        f"p = {format_p(r.p)}",
        f"field = {r.field.value}",
        f"value = {r.value:.15g}",
    ]
    for f in r.factors:
        ex = "" if f.exact_exponent is None else f" (= {format_fraction(f.exact_exponent)})"
        lines.append(f"  factor {f.name}: {f.base:.15g} ^ {f.exponent:.15g}{ex}")
    return "\n".join(lines)


def cmd_bound(args) -> int:
    m, p, field = args.m, args.p, ScalarField.parse(args.field)
    formula = args.formula
    if args.q is not None:
        q = args.q
        if len(q) != m:
            raise ExponentRangeError(f"--q has {len(q)} entries, m={m}")
        if formula == "thm765":
            r = bound_thm765(m, p, q, field)
        elif formula == "thm999":
            r = bound_thm999(m, p, q, field)
        elif formula == "auto":
            r = bound_for_q(m, p, q, field)
        else:
            raise ExponentRangeError(f"--formula {formula} does not take --q")
    elif formula in ("thm765", "thm999"):
        raise ExponentRangeError(f"--formula {formula} needs --q")
    elif formula == "auto":
        r = best_bound(m, p, field)
    elif formula == "yhb":
        r = bound_yhb(m, p, field)
    elif formula == "yu9":
        r = bound_yu9(m, p, field)
    elif formula == "yu10":
        r = bound_yu10(m, field, p)
    elif formula == "bh":
        r = bound_bh_baseline(m, field)
    else:
        r = bound_endpoint_2m(m, field)
    text = _format_report(r)
    if r.formula is Formula.YHB and r.p == upper_endpoint(m):
        text += f"\nnote: at p = 2m^3-4m^2+2m this coincides with YU10 = {bound_yu10(m, field).value:.15g}"
    print(text)
    return 0


def cmd_compare(args) -> int:
    ms = range(args.m_min, args.m_max + 1)
    table = comparison_table(ms, args.p, args.field, args.points)
    _emit(_render(table, args.format), args.out)
    return 0


def cmd_verify(args) -> int:
    cfg = ExperimentConfig(
        m=args.m,
        n=args.n,
        p=args.p,
        field=args.field,
        trials=args.trials,
        restarts=args.restarts,
        seed=args.seed,
        distribution=args.distribution,
        exponent="custom" if args.q is not None else args.exponent,
        q=args.q,
        exact=args.exact,
    )
    result = run_ratio_experiment(cfg, threads=args.threads)
    _emit(_render(result.table(), args.format), args.out)
    bad = result.violations
    if bad:
        r = bad[0]
        sys.stderr.write(
            f"hard violation in trial {r.trial}: mixed norm {r.mixed_norm:.15g} > "
            f"{r.bound:.15g} * {r.norm:.15g}\n"
        )
        sys.stderr.write(dumps_tensor(r.tensor))
        return EXIT_VIOLATION
    return 0


def cmd_figure(args) -> int:
    table = figure_grid(args.m_min, args.m_max, args.points)
    _emit(_render(table, args.format), args.out)
    return 0


def cmd_probe(args) -> int:
    table = optimality_probe(args.m, args.p, args.n, args.trials, args.seed, restarts=args.restarts)
    _emit(_render(table, args.format), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hlconst", description="Hardy--Littlewood constant calculator and verifier.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, p_required=True):
        sp.add_argument("--m", type=int, required=True)
        if p_required:
            sp.add_argument("--p", type=_pexp, required=True, help="a/b, decimal, or inf")

    def output(sp):
        sp.add_argument("--out", default=None, help="write to FILE instead of stdout")
        sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = sub.add_parser("exponent", help="exact exponent profile s, lambda_0..lambda_m")
    common(sp)
    sp.set_defaults(func=cmd_exponent)

    sp = sub.add_parser("interpolate", help="interpolation weights and exponent check")
    common(sp)
    sp.set_defaults(func=cmd_interpolate)

    sp = sub.add_parser("bound", help="constant upper bound with factor decomposition")
    common(sp)
    sp.add_argument("--field", choices=["real", "complex"], default="real")
    sp.add_argument(
        "--formula",
        choices=["auto", "yhb", "yu9", "yu10", "thm765", "thm999", "bh", "endpoint"],
        default="auto",
    )
    sp.add_argument("--q", type=_qvec, default=None, help="multiple exponent q1,q2,...")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("compare", help="table of yu9 / yhb / yu10 and the best bound")
    sp.add_argument("--m-min", type=int, default=2)
    sp.add_argument("--m-max", type=int, default=8)
    sp.add_argument("--p", type=lambda t: [_pexp(x) for x in t.split(",")], default=None)
    sp.add_argument("--points", type=int, default=9)
    sp.add_argument("--field", choices=["real", "complex"], default="real")
    output(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("verify", help="empirical check of the inequality on random forms")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--field", choices=["real", "complex"], default="real")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--distribution", choices=["rademacher", "gaussian"], default="rademacher")
    sp.add_argument("--exponent", choices=["critical", "profile"], default="critical")
    sp.add_argument("--q", type=_qvec, default=None, help="custom multiple exponent q1,q2,...")
    sp.add_argument("--exact", action="store_true", help="force exact vertex norms (p=inf, real)")
    sp.add_argument("--threads", type=int, default=None, help="worker threads (default: HLB_THREADS or 1)")
    output(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("figure", help="grid of the sqrt(2) exponent over (m, p)")
    sp.add_argument("--m-min", type=int, default=3)
    sp.add_argument("--m-max", type=int, default=8)
    sp.add_argument("--points", type=int, default=25)
    output(sp)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("probe", help="growth of ||T||_r / ||T|| with n for r at and below s")
    common(sp)
    sp.add_argument("--n", type=_ints, default=[2, 4, 6, 8])
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    output(sp)
    sp.set_defaults(func=cmd_probe)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ArithmeticError, ValueError, TypeError) as exc:
        sys.stderr.write(f"hlconst {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
