"""Semantic consequence over the standard models.

``Γ ⊨ t`` holds when every point at which all premises are at least ``e`` also
has ``t`` at least ``e``.  For LA the model is ℝ with ``e = 0``; for MV it is
[0, 1] with ``e = 1``.  A failing instance is a point with all premises
``>= e`` and the conclusion ``< e``; we search for one by splitting premises
into the disjuncts of their lattice normal form, the negated conclusion into
the conjuncts of its conormal form, and every guard into its two sign cases,
with exact Fourier–Motzkin feasibility as the leaf test.  LAMBDA as a
conclusion is the empty join, so the question becomes premise satisfiability.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .fm import ConstraintSystem, LinearConstraint, fm_feasible
from .normal_form import LinForm, mv_pieces, normalize
from .terms import (
    E, LAMBDA, Bin, Conclusion, Const, Scale, Signature, SignatureError, Term, Un, Var,
    VarContext, desugar, free_vars, has_guard,
)


class OracleError(ValueError):
    pass


def threshold(family: str) -> int:
    return 1 if family == "MV" else 0


# --- direct evaluation --------------------------------------------------------

def evaluate(t: Term, point: Mapping[str, object], family: str | Signature = "LA") -> Fraction:
    if isinstance(family, Signature):
        family = family.family
    if family not in ("LA", "MV"):
        raise OracleError(f"no standard model for {family}")
    env = {k: Fraction(v) for k, v in point.items()}
    return _eval(t, env, family)


def _eval(t: Term, env, fam: str) -> Fraction:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise OracleError(f"no value for variable {t.name}") from None
    if isinstance(t, Const):
        return Fraction(1) if (fam == "MV" and t.kind == "e") else Fraction(0)
    if isinstance(t, Scale):
        return t.n * _eval(t.arg, env, fam)
    if isinstance(t, Un):
        a = _eval(t.arg, env, fam)
        if t.op == "neg":
            return -a
        if t.op == "not":
            return 1 - a
        return Fraction(1) if a >= 1 else Fraction(0)  # delta
    a = _eval(t.left, env, fam)
    op = t.op
    if op == "guard":
        e = Fraction(threshold(fam))
        return _eval(t.right, env, fam) if a >= e else e
    b = _eval(t.right, env, fam)
    if op == "meet":
        return min(a, b)
    if op == "join":
        return max(a, b)
    if fam == "LA":
        if op in ("prod", "plus"):
            return a + b
        if op == "lres":
            return b - a
        if op in ("rres", "minus"):
            return a - b
    else:
        if op == "prod":
            return max(Fraction(0), a + b - 1)
        if op == "lres":
            return min(Fraction(1), 1 - a + b)
        if op == "rres":
            return min(Fraction(1), a - b + 1)
        if op == "oplus":
            return min(Fraction(1), a + b)
    raise OracleError(f"operation {op!r} has no {fam} interpretation")


def holds_at(premises: Sequence[Term], conclusion: Conclusion, point, family: str) -> bool:
    """Whether the implication 'all premises >= e  =>  conclusion >= e' holds at ``point``."""
    e = threshold(family)
    if not all(evaluate(s, point, family) >= e for s in premises):
        return True
    if conclusion is LAMBDA:
        return False
    return evaluate(conclusion, point, family) >= e


# --- guard resolution -----------------------------------------------------------

@lru_cache(maxsize=100_000)
def resolve_guards(t: Term) -> tuple:
    """All guard-free readings of ``t``: tuples ``(term, conditions)`` where each
    condition is ``(guard_left_resolved, fires)``.  Conditions of one reading
    may be jointly unsatisfiable; the search prunes those."""
    if isinstance(t, (Var, Const)):
        return ((t, ()),)
    if isinstance(t, (Un, Scale)):
        return tuple((Un(t.op, a) if isinstance(t, Un) else Scale(t.n, a), c)
                     for a, c in resolve_guards(t.arg))
    assert isinstance(t, Bin)
    lefts = resolve_guards(t.left)
    if t.op == "guard":
        out = []
        rights = resolve_guards(t.right)
        for u, cu in lefts:
            for v, cv in rights:
                out.append((v, cu + cv + ((u, True),)))
            out.append((E, cu + ((u, False),)))
        return tuple(out)
    rights = resolve_guards(t.right)
    return tuple((Bin(t.op, l, r), cl + cr) for l, cl in lefts for r, cr in rights)


# --- constraint alternatives ----------------------------------------------------

def _ge(f: LinForm, c: int) -> LinearConstraint:
    return LinearConstraint.make(f.as_dict(), c - f.const, False)


def _lt(f: LinForm, c: int) -> LinearConstraint:
    return LinearConstraint.make({k: -v for k, v in f.coeffs}, f.const - c, True)


def _prune(alts):
    out = []
    for alt in alts:
        alt = tuple(c for c in alt if c.lhs or not c.trivial_ok())
        if any(not c.lhs for c in alt):
            continue  # a constant constraint that fails
        out.append(alt)
    return tuple(out)


@lru_cache(maxsize=200_000)
def atom_alternatives(t: Term, family: str, at_least: bool, method: str = "nf") -> tuple:
    """Alternative constraint tuples describing ``t >= e`` (or ``t < e``)."""
    c = threshold(family)
    if method == "pieces" and family == "MV":
        alts = []
        for piece in mv_pieces(t):
            val = _ge(piece.value, c) if at_least else _lt(piece.value, c)
            alts.append(tuple(piece.guards) + (val,))
        return _prune(alts)
    nf = normalize(t, family)
    if at_least:
        return _prune(tuple(_ge(f, c) for f in m) for m in nf.dnf)
    return _prune(tuple(_lt(f, c) for f in j) for j in nf.cnf)


# --- search -------------------------------------------------------------------------

@dataclass
class Verdict:
    holds: bool
    counterexample: dict | None = None
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


# Goals form an AND/OR tree over atoms ("atom", term, at_least); guards are
# split by polarity through the lattice connectives and only fall back to
# enumerating readings underneath the group/monoid operations.

def goal(t: Term, at_least: bool):
    if not has_guard(t):
        return ("atom", t, at_least)
    if isinstance(t, Bin) and t.op in ("meet", "join"):
        kind = "and" if (t.op == "meet") == at_least else "or"
        return (kind, (goal(t.left, at_least), goal(t.right, at_least)))
    if isinstance(t, Bin) and t.op == "guard":
        if at_least:
            return ("or", (("and", (goal(t.left, True), goal(t.right, True))), goal(t.left, False)))
        return ("and", (goal(t.left, True), goal(t.right, False)))
    readings = []
    for term, conds in resolve_guards(t):
        parts = tuple(("atom", u, fires) for u, fires in conds) + (("atom", term, at_least),)
        readings.append(("and", parts))
    return ("or", tuple(readings))


class _Search:
    def __init__(self, family: str, box: tuple, method: str = "nf"):
        self.family = family
        self.box = box
        self.method = method
        self.memo: dict = {}
        self.fm_calls = 0

    def feasible(self, cons: frozenset):
        r = self.memo.get(cons)
        if r is None:
            self.fm_calls += 1
            r = fm_feasible(ConstraintSystem(tuple(sorted(cons, key=repr)), self.box))
            self.memo[cons] = r
        return r

    def alternatives(self, node):
        if node[0] == "alts":
            return node[1]
        return atom_alternatives(node[1], self.family, node[2], self.method)

    def solve(self, agenda: list, cons: frozenset = frozenset()):
        """Witness point satisfying every goal on the agenda, or None."""
        if not agenda:
            return self.feasible(cons).witness
        node, rest = agenda[0], agenda[1:]
        kind = node[0]
        if kind == "and":
            return self.solve(list(node[1]) + rest, cons)
        if kind == "or":
            for child in node[1]:
                w = self.solve([child] + rest, cons)
                if w is not None:
                    return w
            return None
        for alt in self.alternatives(node):
            new = cons.union(alt)
            if new != cons and not self.feasible(new).feasible:
                continue
            w = self.solve(rest, new)
            if w is not None:
                return w
        return None


def _sample_points(names: Sequence[str], family: str, count: int = 12):
    rng = random.Random(0x5EED)
    if family == "MV":
        vals = [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4)]
    else:
        vals = [Fraction(v) for v in (-3, -2, -1, 1, 2, 3)]
    for _ in range(count):
        yield {n: rng.choice(vals) for n in names}


def _prepare(sig, ctx, premises, conclusion):
    if isinstance(sig, str):
        sig = Signature.parse(sig)
    if sig.family not in ("LA", "MV"):
        raise OracleError(f"{sig.value} has no standard model to decide over")
    if ctx is None:
        ctx = VarContext.infer(*premises, conclusion)
    elif not isinstance(ctx, VarContext):
        ctx = VarContext(tuple(ctx))
    ctx.check_declared(*premises, conclusion)
    prem = [desugar(s, sig) for s in premises]
    concl = LAMBDA if conclusion is LAMBDA else desugar(conclusion, sig)
    if not sig.guarded and any(has_guard(t) for t in prem + [concl]):
        raise SignatureError(f"guard used in non-guarded signature {sig.value}")
    return sig, ctx, prem, concl


def check(sig, ctx, premises: Sequence[Term], conclusion: Conclusion, *, method: str = "nf",
          sample: bool = True) -> Verdict:
    """Decide ``premises ⊨ conclusion`` and return a counterexample point when it fails."""
    sig, ctx, prem, concl = _prepare(sig, ctx, premises, conclusion)
    fam = sig.family
    names = set(ctx.all_vars)
    for t in prem + [concl]:
        if t is not LAMBDA:
            names |= free_vars(t)
    names = sorted(names)
    if sample:
        for pt in _sample_points(names, fam):
            if not holds_at(prem, concl, pt, fam):
                return Verdict(False, pt, {"via": "sample"})
    box = tuple(names) if fam == "MV" else ()
    search = _Search(fam, box, method)
    agenda = [goal(s, True) for s in prem]
    if concl is not LAMBDA:
        agenda.append(goal(concl, False))
    witness = search.solve(agenda)
    stats = {"via": "search", "fm_calls": search.fm_calls}
    if witness is None:
        return Verdict(True, None, stats)
    point = {n: witness.get(n, Fraction(0)) for n in names}
    if holds_at(prem, concl, point, fam):
        raise OracleError("internal error: search witness does not refute the consequence")
    return Verdict(False, point, stats)


def decide(sig, ctx, premises: Sequence[Term], conclusion: Conclusion, **kw) -> bool:
    return check(sig, ctx, premises, conclusion, **kw).holds


def satisfiable(sig, ctx, premises: Sequence[Term]) -> bool:
    return not decide(sig, ctx, premises, LAMBDA)


# --- quantifier-free formulas over ordered abelian groups -------------------------

def decide_oag_qf(phi) -> bool:
    """Validity of a quantifier-free LA formula over all ordered abelian groups:
    valid over ℝ and in the trivial group."""
    from .qf import trivial_value

    return qf_counterexample(phi) is None and trivial_value(phi)


def qf_counterexample(phi) -> dict | None:
    """A rational point falsifying ``phi`` over ℝ, or None if ``phi`` is ℝ-valid."""
    from .qf import Not, literal_constraints, to_dnf

    names = sorted(phi.variables())
    search = _Search("LA", ())
    for conj in to_dnf(Not(phi)):
        agenda = sorted((("alts", literal_constraints(l)) for l in conj), key=lambda n: len(n[1]))
        w = search.solve(agenda)
        if w is not None:
            return {n: w.get(n, Fraction(0)) for n in names}
    return None
