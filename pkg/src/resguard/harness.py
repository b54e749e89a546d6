"""Randomized property suites that bind each construction to the oracle.

Every case draws from its own PRNG stream (seed, suite, index), so a report
depends only on the configuration.  A failing case is stored as printed terms
and can be re-run with :func:`replay`.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product

from . import classic, finalg, guarded_dt, oracle
from .elimination import eliminate
from .fm import ConstraintSystem, LinearConstraint, brute_force_feasible, fm_feasible
from .guards import deduction_right, eliminate_guards, reverse_disjunct
from .interpolation import (
    NoWitness, left_interpolant_report, right_interpolant_report,
)
from .normal_form import LinForm, form_to_term
from .qf import conj, eval_la, implies, le, lt, print_formula
from .randgen import case_rng, random_lattice_of_forms, random_nonleaf_term, random_term
from .syntax import parse_conclusion, parse_term, print_term
from .terms import (
    E, LAMBDA, Signature, VarContext, count_guards, free_vars, guard, has_guard,
    join_conclusion, meet,
)

FORMAT = 1


@dataclass
class SuiteConfig:
    suite: str
    seed: int = 0
    cases: int = 100
    max_depth: int = 4
    max_vars: int = 3
    coef: int = 3
    signature: str | None = None
    probes: int = 10
    workers: int = 1


@dataclass
class SuiteReport:
    suite: str
    config: dict
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    counterexample: dict | None = None
    stats: dict = field(default_factory=dict)
    seconds: float | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0 and not self.stats.get("shortfall")

    def to_json(self, timing: bool = False) -> dict:
        out = {"format": FORMAT, "suite": self.suite, "config": self.config, "ok": self.ok,
               "passed": self.passed, "failed": self.failed, "skipped": self.skipped,
               "counterexample": self.counterexample, "stats": self.stats}
        if timing and self.seconds is not None:
            out["seconds"] = round(self.seconds, 3)
        return out


def _names(cfg, extra=()):
    return [f"x{i + 1}" for i in range(max(1, cfg.max_vars))] + list(extra)


def _pt(t):
    return print_term(t)


def _concl(t):
    return "LAMBDA" if t is LAMBDA else print_term(t)


def _sigs(cfg, default):
    if cfg.signature:
        return [Signature.parse(cfg.signature)]
    return default


# --- fm -----------------------------------------------------------------------------

def _random_system(rng, nvars=3, ncons=6, coef=5):
    names = [f"v{i}" for i in range(rng.randint(1, nvars))]
    cons = []
    for _ in range(rng.randint(1, ncons)):
        lhs = {n: rng.randint(-coef, coef) for n in names}
        cons.append(LinearConstraint.make(lhs, rng.randint(-coef, coef), rng.random() < 0.4))
    return ConstraintSystem(tuple(cons))


def _fm_check(system):
    got = fm_feasible(system)
    want = brute_force_feasible(system)
    ok = got.feasible == want and (not got.feasible or system.holds(got.witness))
    return ok, {"fm": got.feasible, "brute_force": want}


def case_fm(cfg, i):
    system = _random_system(case_rng(cfg.seed, "fm", i), coef=max(cfg.coef, 5))
    ok, info = _fm_check(system)
    cex = None if ok else {"constraints": [[dict(c.lhs), str(c.bound), c.strict] for c in system.constraints], **info}
    return ok, cex, {}


# --- deduction / reverse --------------------------------------------------------------

def _premises(rng, sig, names, depth):
    return [random_term(rng, sig, names, rng.randint(1, depth), max_guards=1) for _ in range(rng.randint(0, 2))]


def _deduction_check(sig, gamma, s, t):
    g2, t2 = deduction_right(gamma, s, t, sig)
    left = oracle.decide(sig, None, list(gamma) + [s], t)
    right = oracle.decide(sig, None, g2, t2)
    return left == right, {"with_premise": left, "guarded": right}


def case_deduction(cfg, i):
    sigs = _sigs(cfg, [Signature.LA_GUARD, Signature.MV_GUARD])
    out_ok, cex, counts = True, None, {}
    for sig in sigs:
        rng = case_rng(cfg.seed, f"deduction:{sig.value}", i)
        names = _names(cfg)[: rng.randint(1, max(1, cfg.max_vars + 1))]
        depth = min(cfg.max_depth + 1, 5)
        gamma = _premises(rng, sig, names, depth)
        s = random_term(rng, sig, names, rng.randint(1, depth), max_guards=1)
        t = random_term(rng, sig, names, rng.randint(1, depth), max_guards=1)
        ok, info = _deduction_check(sig, gamma, s, t)
        counts[f"{sig.value}:holds"] = int(info["with_premise"])
        if not ok and out_ok:
            out_ok = False
            cex = {"signature": sig.value, "premises": [_pt(g) for g in gamma], "s": _pt(s), "t": _pt(t), **info}
    return out_ok, cex, counts


def _reverse_check(sig, gamma, s, t, names):
    ctx = VarContext(tuple(names))
    g2, t2 = reverse_disjunct(gamma, s, t, ctx, sig)
    left = oracle.decide(sig, ctx, gamma, join_conclusion(s, t))
    right = oracle.decide(sig, ctx, g2, t2)
    return left == right, {"disjunction": left, "reversed": right}


def case_reverse(cfg, i):
    sigs = _sigs(cfg, [Signature.LA_GUARD, Signature.MV_GUARD])
    sig = sigs[i % len(sigs)]
    rng = case_rng(cfg.seed, "reverse", i)
    names = _names(cfg)
    depth = min(cfg.max_depth + 1, 5)
    gamma = _premises(rng, sig, names, depth)
    s = LAMBDA if rng.random() < 0.1 else random_term(rng, sig, names, rng.randint(1, depth), max_guards=1)
    t = random_term(rng, sig, names, rng.randint(1, depth), max_guards=1)
    ok, info = _reverse_check(sig, gamma, s, t, names)
    cex = None if ok else {"signature": sig.value, "vars": names, "premises": [_pt(g) for g in gamma],
                           "s": _concl(s), "t": _pt(t), **info}
    return ok, cex, {"holds": int(info["disjunction"])}


# --- guard elimination ------------------------------------------------------------------

def _probe(rng, sig, names, depth, allow_lambda=False):
    if allow_lambda and rng.random() < 0.2:
        return LAMBDA
    return random_term(rng, sig.without_guard(), names, rng.randint(0, depth))


def _ledger_check(sig, s, t, pairs, u, v):
    whole = oracle.decide(sig, None, [meet(u, s)], join_conclusion(t, v))
    parts = all(oracle.decide(sig, None, [meet(u, sp)], join_conclusion(tp, v)) for sp, tp in pairs)
    return whole == parts, {"original": whole, "pairs": parts}


def case_guard_elim(cfg, i):
    sigs = _sigs(cfg, [Signature.LA_GUARD, Signature.MV_GUARD])
    sig = sigs[i % len(sigs)]
    rng = case_rng(cfg.seed, "guard-elim", i)
    names = _names(cfg)
    depth = cfg.max_depth
    while True:
        s = random_term(rng, sig, names, rng.randint(1, depth), guard_prob=0.35, max_guards=2)
        t = LAMBDA if rng.random() < 0.2 else random_term(rng, sig, names, rng.randint(1, depth),
                                                         guard_prob=0.35, max_guards=2)
        if count_guards(s) + count_guards(t) > 0 or rng.random() < 0.1:
            break
    res = eliminate_guards(s, t)
    pairs = list(res)
    g = count_guards(s) + count_guards(t)
    if any(has_guard(a) or has_guard(b) for a, b in pairs) or not (1 <= len(pairs) <= 2 ** g):
        return False, {"signature": sig.value, "s": _pt(s), "t": _concl(t), "reason": "shape"}, {}
    for j in range(cfg.probes):
        u = _probe(rng, sig, names, 2)
        v = _probe(rng, sig, names, 2, allow_lambda=True)
        ok, info = _ledger_check(sig, s, t, pairs, u, v)
        if not ok:
            return False, {"signature": sig.value, "s": _pt(s), "t": _concl(t), "u": _pt(u), "v": _concl(v),
                           **info}, {}
    return True, None, {"guards": g, "pairs": len(pairs)}


# --- variable elimination ----------------------------------------------------------------

def _la_probe(rng, names, coef, allow_lambda=False):
    if allow_lambda and rng.random() < 0.2:
        return LAMBDA
    return random_lattice_of_forms(rng, names, max_factors=2, coef=coef)


def case_var_elim(cfg, i):
    rng = case_rng(cfg.seed, "var-elim", i)
    xs = _names(cfg)[:2]
    names = xs + ["y"]
    s = random_lattice_of_forms(rng, names, 3, cfg.coef, y="y")
    t = LAMBDA if rng.random() < 0.15 else random_lattice_of_forms(rng, names, 3, cfg.coef, y="y")
    res = eliminate(s, t, "y")
    pairs = list(res.pairs)
    for a, b in pairs:
        if "y" in free_vars(a) or (b is not LAMBDA and "y" in free_vars(b)):
            return False, {"s": _pt(s), "t": _concl(t), "reason": "output mentions y"}, {}
    probe_names = xs + ["z1", "z2"]
    for j in range(cfg.probes):
        u = _la_probe(rng, probe_names, cfg.coef)
        v = _la_probe(rng, probe_names, cfg.coef, allow_lambda=True)
        ok, info = _ledger_check(Signature.LA, s, t, pairs, u, v)
        if not ok:
            return False, {"s": _pt(s), "t": _concl(t), "u": _pt(u), "v": _concl(v), **info}, {}
    return True, None, {"pairs": len(pairs), "k": res.k_scale}


# --- uniform interpolation ------------------------------------------------------------------

SIG_G = Signature.LA_GUARD


def _right_check(s, v, s_star):
    a = oracle.decide(SIG_G, None, [s], v)
    b = oracle.decide(SIG_G, None, [s_star], v)
    return a == b, {"from_s": a, "from_interpolant": b}


def _left_check(t, u, t_star):
    a = oracle.decide(SIG_G, None, [u], t)
    b = oracle.decide(SIG_G, None, [u], t_star)
    return a == b, {"to_t": a, "to_interpolant": b}


def _coherence(epairs, u, w_free):
    """Deduction coherence on every pair met while interpolating."""
    for s2, t2 in epairs:
        t3 = join_conclusion(t2, w_free)
        if t3 is LAMBDA:
            continue
        if oracle.decide(SIG_G, None, [u], guard(s2, t3)) != oracle.decide(SIG_G, None, [meet(u, s2)], t3):
            return False
    return True


def case_uinterp_right(cfg, i):
    rng = case_rng(cfg.seed, "uinterp-right", i)
    xs = _names(cfg)[:2]
    s = random_nonleaf_term(rng, SIG_G, xs + ["y"], min(cfg.max_depth + 1, 5), max_guards=1)
    rep = right_interpolant_report(s, "y", VarContext(tuple(xs), "y"))
    s_star = rep.output
    if "y" in free_vars(s_star):
        return False, {"s": _pt(s), "reason": "interpolant mentions y"}, {}
    for j in range(cfg.probes):
        v = random_term(rng, SIG_G, xs, rng.randint(0, 3), max_guards=1)
        ok, info = _right_check(s, v, s_star)
        if not ok:
            return False, {"s": _pt(s), "v": _pt(v), "interpolant": _pt(s_star), **info}, {}
    return True, None, {}


def case_uinterp_left(cfg, i):
    rng = case_rng(cfg.seed, "uinterp-left", i)
    xs = _names(cfg)[:2]
    t = random_nonleaf_term(rng, SIG_G, xs + ["y"], min(cfg.max_depth + 1, 5), max_guards=1)
    rep = left_interpolant_report(t, "y", VarContext(tuple(xs), "y"))
    if isinstance(rep.output, NoWitness):
        return None, None, {"no_witness": 1}
    t_star = rep.output
    if "y" in free_vars(t_star) or "y" in free_vars(rep.witness):
        return False, {"t": _pt(t), "reason": "interpolant mentions y"}, {}
    from .interpolation import strip_guards
    w_free = strip_guards(rep.witness)
    for j in range(cfg.probes):
        u = random_term(rng, SIG_G, xs + ["z1"], rng.randint(0, 3), max_guards=1)
        ok, info = _left_check(t, u, t_star)
        if not ok:
            return False, {"t": _pt(t), "u": _pt(u), "interpolant": _pt(t_star), **info}, {}
        if j < 2 and not _coherence(rep.elim_pairs, u, w_free):
            return False, {"t": _pt(t), "u": _pt(u), "reason": "deduction coherence"}, {}
    return True, None, {"witnessed": 1}


# --- conservativity ---------------------------------------------------------------------------

def case_conservativity(cfg, i):
    out = []
    for base in (Signature.LA, Signature.MV):
        rng = case_rng(cfg.seed, f"conservativity:{base.value}", i)
        names = _names(cfg)
        gamma = _premises(rng, base, names, cfg.max_depth)
        t = LAMBDA if rng.random() < 0.1 else random_term(rng, base, names, rng.randint(1, cfg.max_depth))
        plain = oracle.decide(base, None, gamma, t)
        guarded = oracle.decide(base.with_guard(), None, gamma, t)
        # e ⊳ t denotes t, but is only expressible with the guard
        wrapped = guarded if t is LAMBDA else oracle.decide(base.with_guard(), None, gamma, guard(E, t))
        if not (plain == guarded == wrapped):
            return False, {"signature": base.value, "premises": [_pt(g) for g in gamma], "t": _concl(t),
                           "plain": plain, "guarded": guarded, "wrapped": wrapped}, {}
        out.append(plain)
    return True, None, {"holds": sum(out)}


# --- guarded deduction instances -----------------------------------------------------------------

def case_guarded_dt(cfg, i):
    counts = {}
    for name in sorted(guarded_dt.PRESETS):
        gamma, phi = guarded_dt.preset(name)
        inst = guarded_dt.random_instance(case_rng(cfg.seed, "guarded-dt", i))
        li, ri = guarded_dt.condition_i(inst, gamma, phi)
        lii, rii = guarded_dt.condition_ii(inst, gamma)
        counts["i_true"] = int(li)
        if li != ri or lii != rii:
            return False, {"preset": name, **inst.to_json(), "i": [li, ri], "ii": [lii, rii]}, {}
    return True, None, counts


# --- finite algebras ---------------------------------------------------------------------------

FINALG_CHECKS = ("validate", "cg", "edpc", "cip", "hamiltonian")


def _finalg_algebras():
    return ([(f"L{n}", finalg.lukasiewicz(n)) for n in range(2, 6)]
            + [("B2", finalg.boolean2()), ("G3", finalg.goedel_chain(3))])


def finalg_cross_check(name, A, mv=False) -> list:
    """Failed check descriptions for one algebra (empty when everything holds)."""
    bad = []
    rep = finalg.validate(A, commutative=True, mv=mv)
    if not rep.ok:
        bad.append({"algebra": name, "check": "validate", "failures": {k: list(v) if isinstance(v, tuple) else v
                                                                          for k, v in rep.failures().items()}})
    if finalg.is_hamiltonian(A, 1) is not True:
        bad.append({"algebra": name, "check": "hamiltonian"})
    for a, b in product(range(A.n), repeat=2):
        if finalg.cg_bruteforce(A, a, b).pairs() != finalg.cg_hamiltonian(A, a, b):
            bad.append({"algebra": name, "check": "cg", "pair": [a, b]})
            break
    k = next(n for n in range(A.n + 1) if finalg.check_edpc_exponent(A, n))
    if not all(finalg.check_edpc_exponent(A, n) for n in range(k, A.n + 2)):
        bad.append({"algebra": name, "check": "edpc monotone"})
    return bad


def case_finalg(cfg, i):
    algs = _finalg_algebras()
    name, A = algs[i % len(algs)]
    bad = finalg_cross_check(name, A, mv=name.startswith("L") or name == "B2")
    if name == "L3":
        if not (finalg.check_edpc_exponent(A, 2) and not finalg.check_edpc_exponent(A, 1)):
            bad.append({"algebra": name, "check": "edpc"})
        if not all(finalg.check_cip_identity(A, *q) for q in product(range(A.n), repeat=4)):
            bad.append({"algebra": name, "check": "cip"})
    return (not bad), (bad[0] if bad else None), {}


# --- classic constructions ---------------------------------------------------------------------

def _random_psi(rng, xs, y="y", coef=2):
    lits = []
    for _ in range(rng.randint(1, 3)):
        f = LinForm.from_dict({n: rng.randint(-coef, coef) for n in xs})
        c = rng.choice([c for c in range(-coef, coef + 1) if c])
        a = form_to_term(LinForm.var(y, c))
        b = form_to_term(f)
        lits.append((lt if rng.random() < 0.5 else le)(a, b) if rng.random() < 0.5 else
                    (lt if rng.random() < 0.5 else le)(b, a))
    return conj(lits)


def _exists_y(psi, point, y="y") -> bool:
    from .qf import literal_constraints, to_dnf
    from .fm import ConstraintSystem as CS

    # substitute the point and test feasibility in y alone
    for conj_lits in to_dnf(psi):
        alts = [literal_constraints(l) for l in conj_lits]
        for choice in product(*alts):
            rows = []
            for c in (r for alt in choice for r in alt):
                rest = sum((Fraction(point[k]) * v for k, v in c.lhs if k != y), Fraction(0))
                rows.append(LinearConstraint.make({y: c.coeff(y)}, c.bound - rest, c.strict))
            if fm_feasible(CS(tuple(rows))).feasible:
                return True
    return False


def case_classic(cfg, i):
    rng = case_rng(cfg.seed, "classic", i)
    xs = ["x1", "x2"]
    psi = _random_psi(rng, xs)
    chi = classic.chi_oag(psi, "y", xs)
    if not oracle.decide_oag_qf(implies(psi, chi)):
        return False, {"psi": print_formula(psi), "chi": print_formula(chi), "reason": "psi -> chi fails"}, {}
    qe = classic.qe_doag(psi, "y")
    grid = [Fraction(v, 2) for v in range(-4, 5)]
    realized = 0
    for j in range(20):
        pt = {x: rng.choice(grid) for x in xs}
        ex = _exists_y(psi, pt)
        if eval_la(qe, pt) != ex:
            return False, {"psi": print_formula(psi), "qe": print_formula(qe), "point": {k: str(v) for k, v in pt.items()},
                           "reason": "qe disagrees with direct elimination"}, {}
        if eval_la(chi, pt):
            if not ex:
                return False, {"psi": print_formula(psi), "chi": print_formula(chi),
                               "point": {k: str(v) for k, v in pt.items()}, "reason": "chi point not realized"}, {}
            realized += 1
    return True, None, {"realized": realized}


# --- registry ---------------------------------------------------------------------------------

SUITES = {
    "fm": case_fm,
    "deduction": case_deduction,
    "reverse": case_reverse,
    "guard-elim": case_guard_elim,
    "var-elim": case_var_elim,
    "uinterp-right": case_uinterp_right,
    "uinterp-left": case_uinterp_left,
    "conservativity": case_conservativity,
    "guarded-dt": case_guarded_dt,
    "finalg": case_finalg,
    "classic": case_classic,
}

# minimum number of non-skipped cases, as a fraction of the requested count
MIN_WITNESSED = {"uinterp-left": 0.25}


def _run_case(args):
    name, cfg, i = args
    return SUITES[name](cfg, i)


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    if cfg.suite not in SUITES:
        raise KeyError(f"unknown suite {cfg.suite!r}; choose from {sorted(SUITES)}")
    start = time.perf_counter()
    jobs = [(cfg.suite, cfg, i) for i in range(cfg.cases)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_run_case, jobs, chunksize=max(1, cfg.cases // (4 * cfg.workers))))
    else:
        results = [_run_case(j) for j in jobs]
    conf = asdict(cfg)
    conf.pop("workers")
    rep = SuiteReport(cfg.suite, conf)
    totals: dict = {}
    for i, (ok, cex, counts) in enumerate(results):
        for k, v in counts.items():
            totals[k] = totals.get(k, 0) + v
        if ok is None:
            rep.skipped += 1
        elif ok:
            rep.passed += 1
        else:
            rep.failed += 1
            if rep.counterexample is None:
                rep.counterexample = {"case": i, **cex}
    rep.stats = totals
    need = MIN_WITNESSED.get(cfg.suite)
    if need is not None and rep.passed + rep.failed < need * cfg.cases:
        rep.stats["shortfall"] = True
    rep.seconds = time.perf_counter() - start
    return rep


def run_all(seed: int = 0, cases: int = 100, workers: int = 1) -> list[SuiteReport]:
    return [run_suite(SuiteConfig(name, seed=seed, cases=cases, workers=workers)) for name in SUITES]


# --- replay -------------------------------------------------------------------------------------

def _term(src, sig):
    return parse_term(src, sig)


def replay(suite: str, cex: dict):
    """Re-run a stored counterexample; returns the (ok, info) verdict it produces now."""
    if suite == "fm":
        cons = tuple(LinearConstraint.make(lhs, Fraction(b), strict) for lhs, b, strict in cex["constraints"])
        return _fm_check(ConstraintSystem(cons))
    if suite == "deduction":
        sig = Signature.parse(cex["signature"])
        return _deduction_check(sig, [_term(g, sig) for g in cex["premises"]], _term(cex["s"], sig),
                                _term(cex["t"], sig))
    if suite == "reverse":
        sig = Signature.parse(cex["signature"])
        return _reverse_check(sig, [_term(g, sig) for g in cex["premises"]], parse_conclusion(cex["s"], sig),
                              _term(cex["t"], sig), cex["vars"])
    if suite in ("guard-elim", "var-elim"):
        sig = Signature.parse(cex.get("signature", "LA"))
        s, t = _term(cex["s"], sig), parse_conclusion(cex["t"], sig)
        if suite == "guard-elim":
            pairs = list(eliminate_guards(s, t))
        else:
            pairs = list(eliminate(s, t, "y").pairs)
        return _ledger_check(sig, s, t, pairs, _term(cex["u"], sig), parse_conclusion(cex["v"], sig))
    if suite == "uinterp-right":
        s = _term(cex["s"], SIG_G)
        return _right_check(s, _term(cex["v"], SIG_G), right_interpolant_report(s, "y").output)
    if suite == "uinterp-left":
        t = _term(cex["t"], SIG_G)
        return _left_check(t, _term(cex["u"], SIG_G), left_interpolant_report(t, "y").output)
    if suite == "conservativity":
        base = Signature.parse(cex["signature"])
        gamma = [_term(g, base) for g in cex["premises"]]
        t = parse_conclusion(cex["t"], base)
        plain = oracle.decide(base, None, gamma, t)
        guarded = oracle.decide(base.with_guard(), None, gamma, t)
        return plain == guarded, {"plain": plain, "guarded": guarded}
    raise KeyError(f"no replay for suite {suite!r}")
