"""The guard calculus: deduction transform, disjunct reversal, guard elimination."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .terms import (
    E, LAMBDA, Bin, Conclusion, Signature, SignatureError, Term, children,
    guard, join_conclusion, meet, nabla, rebuild,
)


class GuardCalculusError(ValueError):
    pass


def _require_guarded(sig):
    if sig is not None and not Signature(sig).guarded:
        raise SignatureError(f"the guard calculus needs a guarded signature, got {Signature(sig).value}")


def deduction_right(premises: Sequence[Term], s: Term, t: Conclusion, sig=None):
    """``Γ ∪ {s} ⊨ t``  becomes  ``Γ ⊨ s ⊳ t``."""
    _require_guarded(sig)
    if t is LAMBDA:
        raise GuardCalculusError("s |> LAMBDA is not a term")
    return list(premises), guard(s, t)


def deduction_left(premises: Sequence[Term], conclusion: Term, sig=None):
    """Inverse of :func:`deduction_right`: ``Γ ⊨ s ⊳ t`` becomes ``(Γ, s, t)``."""
    _require_guarded(sig)
    if not (isinstance(conclusion, Bin) and conclusion.op == "guard"):
        raise GuardCalculusError("conclusion is not a guard term")
    return list(premises), conclusion.left, conclusion.right


def reverse_disjunct(premises: Sequence[Term], s: Conclusion, t: Conclusion, ctx, sig=None):
    """``Γ ⊨ s ∨ t``  becomes  ``Γ ∪ {∇s} ⊨ t``."""
    _require_guarded(sig)
    return list(premises) + [nabla(s, ctx)], t


@dataclass(frozen=True)
class GuardElimResult:
    pairs: tuple  # ((s', t'), ...)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def _innermost_guard(t: Term):
    """Path to the leftmost-innermost guard occurrence, or None."""
    for i, c in enumerate(children(t)):
        p = _innermost_guard(c)
        if p is not None:
            return (i,) + p
    if isinstance(t, Bin) and t.op == "guard":
        return ()
    return None


def _at(t: Term, path) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def _replace(t: Term, path, new: Term) -> Term:
    if not path:
        return new
    kids = list(children(t))
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return rebuild(t, kids)


def eliminate_guards(s: Term, t: Conclusion) -> GuardElimResult:
    """Branch on the leftmost-innermost guard, premise side first, until no guard is left.

    Premise occurrence ``s1 ⊳ s2`` in ``s``: ``(s[s2] ∧ s1, t)`` and ``(s[e], t ∨ s1)``.
    Conclusion occurrence ``t1 ⊳ t2`` in ``t``: ``(s ∧ t1, t[t2])`` and ``(s, t[e] ∨ t1)``.
    """
    out = []
    stack = [(s, t)]
    while stack:
        s_cur, t_cur = stack.pop()
        path = _innermost_guard(s_cur)
        if path is not None:
            g = _at(s_cur, path)
            s1, s2 = g.left, g.right
            fire = (meet(_replace(s_cur, path, s2), s1), t_cur)
            idle = (_replace(s_cur, path, E), join_conclusion(t_cur, s1))
            stack.append(idle)
            stack.append(fire)
            continue
        path = _innermost_guard(t_cur) if t_cur is not LAMBDA else None
        if path is not None:
            g = _at(t_cur, path)
            t1, t2 = g.left, g.right
            fire = (meet(s_cur, t1), _replace(t_cur, path, t2))
            idle = (s_cur, join_conclusion(_replace(t_cur, path, E), t1))
            stack.append(idle)
            stack.append(fire)
            continue
        out.append((s_cur, t_cur))
    return GuardElimResult(tuple(out))
