"""Command line entry point: ``resguard <subcommand> ...``.

Exit status is 0 on success, 1 when a property violation is found and 2 for
unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import product

from . import classic, finalg, harness, oracle
from .elimination import EliminationError, eliminate
from .guards import eliminate_guards
from .interpolation import NoWitness, WitnessError, left_interpolant_report, right_interpolant_report
from .qf import parse_formula, print_formula
from .syntax import ParseError, ProblemError, load_problem, parse_conclusion, parse_term, print_term
from .terms import LAMBDA, Signature, SignatureError, UndeclaredVariable

OK, VIOLATION, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    def __init__(self, message, **extra):
        super().__init__(message)
        self.extra = extra


def _show(t) -> str:
    return "LAMBDA" if t is LAMBDA else print_term(t)


def _num(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _sig(name):
    try:
        return Signature.parse(name)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# --- subcommands ---------------------------------------------------------------

def cmd_check(args):
    p = load_problem(args.problem)
    v = oracle.check(p.sig, p.ctx, p.premises, p.conclusion, method=args.method)
    out = {"verdict": v.holds}
    if v.counterexample is not None:
        out["counterexample"] = {k: _num(x) for k, x in sorted(v.counterexample.items())}
    text = "holds" if v.holds else "fails at " + ", ".join(f"{k}={x}" for k, x in out["counterexample"].items())
    return OK, out, text


def cmd_eliminate_guard(args):
    sig = _sig(args.sig)
    s = parse_term(args.s, sig)
    t = parse_conclusion(args.t, sig)
    pairs = [[_show(a), _show(b)] for a, b in eliminate_guards(s, t)]
    text = "\n".join(f"{a}  |=  {b}" for a, b in pairs)
    return OK, {"pairs": pairs}, text


def cmd_eliminate_var(args):
    s = parse_term(args.s, Signature.LA)
    t = parse_conclusion(args.t, Signature.LA)
    res = eliminate(s, t, args.y)
    pairs = [[_show(a), _show(b)] for a, b in res.pairs]
    text = "\n".join(f"{a}  |=  {b}" for a, b in pairs) + f"\n(k = {res.k_scale})"
    return OK, {"pairs": pairs, "k": res.k_scale}, text


def cmd_uinterp(args):
    term = parse_term(args.term, Signature.LA_GUARD)
    if args.side == "right":
        if args.witness is not None:
            raise InputError("--witness only applies to left interpolants")
        rep = right_interpolant_report(term, args.var)
    else:
        w = parse_term(args.witness, Signature.LA_GUARD) if args.witness is not None else None
        try:
            rep = left_interpolant_report(term, args.var, witness=w)
        except WitnessError as exc:
            raise InputError(str(exc)) from None
    out = rep.to_json()
    text = "no witness found" if isinstance(rep.output, NoWitness) else out["output"]
    return OK, out, text


def _formula(src, dlo=False):
    return parse_formula(src, Signature.LA, dlo=dlo)


def cmd_qe_doag(args):
    psi = _formula(args.psi)
    out = classic.qe_doag(psi, args.exvar)
    s = print_formula(out)
    return OK, {"result": s}, s


def cmd_chi_oag(args):
    psi = _formula(args.psi)
    chi = classic.chi_oag(psi, args.exvar)
    s = print_formula(chi)
    return OK, {"chi": s}, s


def cmd_chi_dlo(args):
    psi = _formula(args.psi, dlo=True)
    chi = classic.chi_dlo(psi, args.exvar)
    s = print_formula(chi, dlo=True)
    return OK, {"chi": s}, s


def cmd_finalg(args):
    A = finalg.FiniteAlgebra.load(args.algebra)
    rep = finalg.validate(A, commutative=args.commutative, mv=args.mv)
    fails = {k: list(v) if isinstance(v, tuple) else v for k, v in rep.failures().items()}
    out = {"size": A.n, "valid": rep.ok, "failures": fails}
    lines = [f"{A.n} elements: " + ("all axioms hold" if rep.ok else f"failed {sorted(fails)}")]
    status = OK if rep.ok else VIOLATION
    if args.all and rep.ok:
        ham = finalg.is_hamiltonian(A, 1)
        exp = finalg.hamiltonian_exponent(A)
        out["hamiltonian_k"] = exp
        if exp is None:
            out["hamiltonian_failure"] = list(ham)
        lines.append(f"Hamiltonian exponent: {exp}")
        edpc = next((n for n in range(A.n + 2) if finalg.check_edpc_exponent(A, n)), None)
        out["edpc_exponent"] = edpc
        lines.append(f"least n with (x^e)^n = (x^e)^(n+1): {edpc}")
        if exp is not None:
            bad_cg = [[a, b] for a, b in product(range(A.n), repeat=2)
                      if finalg.cg_bruteforce(A, a, b).pairs() != finalg.cg_hamiltonian(A, a, b)]
            bad_cip = [list(q) for q in product(range(A.n), repeat=4) if not finalg.check_cip_identity(A, *q)]
            out["cg_mismatches"] = bad_cg
            out["cip_failures"] = bad_cip
            lines.append(f"principal congruence mismatches: {len(bad_cg)}; CIP failures: {len(bad_cip)}")
            if bad_cg or bad_cip:
                status = VIOLATION
    return status, out, "\n".join(lines)


def cmd_verify(args):
    names = sorted(harness.SUITES) if args.suite == "all" else [args.suite]
    for n in names:
        if n not in harness.SUITES:
            raise InputError(f"unknown suite {n!r}", choices=sorted(harness.SUITES))
    reports = []
    for n in names:
        cfg = harness.SuiteConfig(n, seed=args.seed, cases=args.cases, max_depth=args.max_depth,
                                  max_vars=args.max_vars, coef=args.coef, signature=args.signature,
                                  probes=args.probes, workers=args.workers)
        reports.append(harness.run_suite(cfg))
    out = {"format": harness.FORMAT, "ok": all(r.ok for r in reports),
           "suites": [r.to_json(timing=args.timing) for r in reports]}
    lines = []
    for r in reports:
        line = f"{r.suite:15s} {'PASS' if r.ok else 'FAIL'}  passed={r.passed} failed={r.failed} skipped={r.skipped}"
        if args.timing:
            line += f"  {r.seconds:.2f}s"
        lines.append(line)
        if r.counterexample:
            lines.append("  counterexample: " + json.dumps(r.counterexample, sort_keys=True))
    return (OK if out["ok"] else VIOLATION), out, "\n".join(lines)


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="resguard", description="Guarded residuated lattice toolkit.")
    ap.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide a consequence problem file")
    p.add_argument("problem")
    p.add_argument("--method", choices=("nf", "pieces"), default="nf")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("eliminate-guard", help="rewrite (s, t) into guard-free pairs")
    p.add_argument("--s", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--sig", default="LA_GUARD")
    p.set_defaults(fn=cmd_eliminate_guard)

    p = sub.add_parser("eliminate-var", help="eliminate one variable from a guard-free LA pair")
    p.add_argument("--y", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--t", required=True)
    p.set_defaults(fn=cmd_eliminate_var)

    p = sub.add_parser("uinterp", help="uniform interpolants in LA with the guard")
    p.add_argument("side", choices=("right", "left"))
    p.add_argument("--var", required=True)
    p.add_argument("--term", required=True)
    p.add_argument("--witness")
    p.set_defaults(fn=cmd_uinterp)

    for name, fn, help_ in (("chi-oag", cmd_chi_oag, "χ for ordered abelian groups"),
                            ("chi-dlo", cmd_chi_dlo, "χ for linear orders with endpoints")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--psi", required=True)
        p.add_argument("--exvar", default="y")
        p.set_defaults(fn=fn)

    p = sub.add_parser("qe-doag", help="eliminate an existential over divisible ordered abelian groups")
    p.add_argument("--psi", required=True)
    p.add_argument("--exvar", required=True)
    p.set_defaults(fn=cmd_qe_doag)

    p = sub.add_parser("finalg", help="check a finite algebra given as JSON tables")
    p.add_argument("algebra")
    p.add_argument("--all", action="store_true", help="also run the congruence cross-checks")
    p.add_argument("--commutative", action="store_true", help="also require a commutative product")
    p.add_argument("--mv", action="store_true", help="also check the MV-algebra axioms")
    p.set_defaults(fn=cmd_finalg)

    p = sub.add_parser("verify", help="run randomized property suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=4)
    p.add_argument("--max-vars", type=int, default=3)
    p.add_argument("--coef", type=int, default=3)
    p.add_argument("--probes", type=int, default=10)
    p.add_argument("--signature")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall-clock times (output is then not reproducible)")
    p.set_defaults(fn=cmd_verify)
    return ap


def _error_payload(exc) -> dict:
    out = {"error": str(exc)}
    if isinstance(exc, ParseError):
        out.update(line=exc.line, col=exc.col, expected=exc.expected, error=exc.message)
    if isinstance(exc, ProblemError):
        out["code"] = exc.code
        if exc.where is not None:
            out.update(line=exc.where.line, col=exc.where.col, expected=exc.where.expected)
    if isinstance(exc, InputError):
        out.update(exc.extra)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        status, payload, text = args.fn(args)
    except (ParseError, ProblemError, InputError, SignatureError, UndeclaredVariable, EliminationError,
            finalg.AlgebraError, OSError, json.JSONDecodeError, ValueError) as exc:
        err = _error_payload(exc)
        if args.json:
            print(json.dumps(err, sort_keys=True))
        else:
            print(f"error: {err['error'] if 'line' not in err else str(exc)}", file=sys.stderr)
        return INPUT_ERROR
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
