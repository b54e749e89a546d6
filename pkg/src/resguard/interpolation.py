"""Right and left uniform interpolants for LA terms with the guard."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import oracle
from .elimination import eliminate
from .guards import eliminate_guards
from .syntax import print_term
from .terms import (
    E, LAMBDA, Signature, Term, VarContext, free_vars, guard, join_all, join_conclusion, meet,
    meet_all, nabla,
)

SIG = Signature.LA_GUARD


class NoWitness:
    """No entailing y-free term was found; ``failing`` is a pair ``(s'', LAMBDA)``."""

    def __init__(self, failing=None):
        self.failing = failing

    def __repr__(self):
        return "NoWitness()"

    def __bool__(self):
        return False


class WitnessError(ValueError):
    """A supplied witness does not entail the term."""


@dataclass
class InterpolantReport:
    input: Term
    variable: str
    output: object
    guard_pairs: list = field(default_factory=list)
    elim_pairs: list = field(default_factory=list)
    witness: Term | None = None

    def to_json(self) -> dict:
        out = {
            "input": print_term(self.input),
            "variable": self.variable,
            "output": "NoWitness" if isinstance(self.output, NoWitness) else print_term(self.output),
            "guard_pairs": [[print_term(s), print_term(t)] for s, t in self.guard_pairs],
            "elim_pairs": [[print_term(s), print_term(t)] for s, t in self.elim_pairs],
        }
        if self.witness is not None:
            out["witness"] = print_term(self.witness)
        return out


def _context(term: Term, y: str, ctx) -> VarContext:
    if ctx is None:
        return VarContext(tuple(sorted(free_vars(term) - {y})), y)
    if not isinstance(ctx, VarContext):
        ctx = VarContext(tuple(ctx), y)
    return ctx


def _pipeline(s: Term, t, y: str):
    gpairs = list(eliminate_guards(s, t))
    epairs = []
    for sp, tp in gpairs:
        epairs.extend(eliminate(sp, tp, y).pairs)
    return gpairs, epairs


def right_interpolant_report(s: Term, y: str, ctx=None) -> InterpolantReport:
    ctx = _context(s, y, ctx)
    gpairs, epairs = _pipeline(s, LAMBDA, y)
    disjuncts = [meet(s2, nabla(t2, ctx)) for s2, t2 in epairs]
    return InterpolantReport(s, y, join_all(disjuncts), gpairs, epairs)


def right_interpolant(s: Term, y: str, ctx=None) -> Term:
    """``s*`` over the kept variables with ``{s} ⊨ v`` iff ``{s*} ⊨ v`` for y-free v."""
    return right_interpolant_report(s, y, ctx).output


def strip_guards(w: Term) -> Term:
    """Turn ``w'[w1 ⊳ w2]`` into ``w'[w2] ∧ w1`` until no guard is left.
    The result is >= e only where ``w`` is."""
    from .guards import _at, _innermost_guard, _replace

    while True:
        path = _innermost_guard(w)
        if path is None:
            return w
        g = _at(w, path)
        w = meet(_replace(w, path, g.right), g.left)


def _candidate(epairs):
    return meet_all(guard(s2, t2) for s2, t2 in epairs if t2 is not LAMBDA)


def canonical_witness(t: Term, y: str, ctx=None):
    ctx = _context(t, y, ctx)
    _, epairs = _pipeline(E, t, y)
    wc = _candidate(epairs)
    if oracle.decide(SIG, None, [wc], t):
        return wc
    failing = next(((s2, t2) for s2, t2 in epairs if t2 is LAMBDA), None)
    return NoWitness(failing)


def left_interpolant_report(t: Term, y: str, ctx=None, witness: Term | None = None) -> InterpolantReport:
    ctx = _context(t, y, ctx)
    gpairs, epairs = _pipeline(E, t, y)
    if witness is not None:
        if y in free_vars(witness):
            raise WitnessError(f"witness mentions the eliminated variable {y}")
        if not oracle.decide(SIG, None, [witness], t):
            raise WitnessError("supplied witness does not entail the term")
        w = witness
    else:
        w = _candidate(epairs)
        if not oracle.decide(SIG, None, [w], t):
            failing = next(((s2, t2) for s2, t2 in epairs if t2 is LAMBDA), None)
            return InterpolantReport(t, y, NoWitness(failing), gpairs, epairs, None)
    w_free = strip_guards(w)
    conj = [guard(s2, join_conclusion(t2, w_free)) for s2, t2 in epairs]
    return InterpolantReport(t, y, meet_all(conj), gpairs, epairs, w)


def left_interpolant(t: Term, y: str, ctx=None, witness: Term | None = None):
    """``t*`` with ``{u} ⊨ t`` iff ``{u} ⊨ t*`` for y-free u, or NoWitness."""
    return left_interpolant_report(t, y, ctx, witness).output
