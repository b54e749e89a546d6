"""One-variable elimination for guard-free lattice-ordered abelian group terms.

For a premise meet ``s0 ∧ (s1+ky) ∧ (s2-ky)`` and a conclusion join
``t0 ∨ (t1+ky) ∨ (t2-ky)`` the existence of a y with premise ``>= 0`` and
conclusion ``< 0`` is the y-free condition

    s0 ∧ (s1+s2) >= 0   and   t0 ∨ (t1+t2) ∨ (t1-s1) ∨ (t2-s2) < 0,

where only the parts whose ingredients occur are kept.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .normal_form import (
    Uniform, join_to_term, meet_to_term, normalize, simplify_join,
    simplify_meet, uniformize_y,
)
from .terms import LAMBDA, Conclusion, Term, free_vars, has_guard


class EliminationError(ValueError):
    pass


@dataclass(frozen=True)
class BasicPair:
    s: tuple  # meet of y-free forms (empty = e)
    t: tuple | None  # join of y-free forms, None = LAMBDA

    def terms(self) -> tuple[Term, Conclusion]:
        return meet_to_term(self.s), join_to_term(self.t)


def eliminate_basic(u: Uniform) -> BasicPair:
    s_parts = list(u.s0)
    if u.s1 is not None and u.s2 is not None:
        s_parts += [a + b for a in u.s1 for b in u.s2]
    t_parts = list(u.t0) if u.t0 is not None else []
    if u.t1 is not None and u.t2 is not None:
        t_parts += [c + d for c in u.t1 for d in u.t2]
    if u.s1 is not None and u.t1 is not None:
        t_parts += [c - a for c in u.t1 for a in u.s1]
    if u.s2 is not None and u.t2 is not None:
        t_parts += [d - b for d in u.t2 for b in u.s2]
    has_t = u.t0 is not None or bool(t_parts)
    return BasicPair(simplify_meet(s_parts), simplify_join(t_parts) if has_t else None)


def witness_y(u: Uniform, point) -> Fraction:
    """A value of y realising the existential at a point where the y-free
    condition holds: ``(min(s2, -t1) + max(-s1, t2)) / 2k`` with absent bounds
    dropped (and the midpoint replaced by an offset when one side is open)."""
    def mn(forms):
        return min(f.evaluate(point) for f in forms)

    def mx(forms):
        return max(f.evaluate(point) for f in forms)

    uppers = []
    lowers = []
    if u.s2 is not None:
        uppers.append(mn(u.s2))
    if u.t1 is not None:
        uppers.append(-mx(u.t1))
    if u.s1 is not None:
        lowers.append(-mn(u.s1))
    if u.t2 is not None:
        lowers.append(mx(u.t2))
    if uppers and lowers:
        return (min(uppers) + max(lowers)) / (2 * u.k)
    if uppers:
        return (min(uppers) - 1) / u.k
    if lowers:
        return (max(lowers) + 1) / u.k
    return Fraction(0)


@dataclass(frozen=True)
class EliminationResult:
    pairs: tuple  # ((s', t'), ...) as terms
    k_scale: int
    basic: tuple = ()  # BasicPair per output pair, same order

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def eliminate(s: Term, t: Conclusion, y: str) -> EliminationResult:
    """Pairs ``(s'_k, t'_k)`` free of ``y`` such that for all y-free u, v:
    ``{u ∧ s} ⊨ t ∨ v`` iff every ``{u ∧ s'_k} ⊨ t'_k ∨ v``."""
    if has_guard(s) or has_guard(t):
        raise EliminationError("eliminate needs guard-free terms; run eliminate_guards first")
    s_nf = normalize(s, "LA")
    cnf = [None] if t is LAMBDA else list(normalize(t, "LA").cnf)
    pairs, basics, k_all = [], [], 1
    for m in s_nf.dnf:
        for j in cnf:
            u = uniformize_y(m, j, y)
            k_all = max(k_all, u.k)
            b = eliminate_basic(u)
            basics.append(b)
            pairs.append(b.terms())
    for sp, tp in pairs:
        if y in free_vars(sp) or (tp is not LAMBDA and y in free_vars(tp)):
            raise EliminationError("internal error: eliminated variable survived")
    return EliminationResult(tuple(pairs), k_all, tuple(basics))
