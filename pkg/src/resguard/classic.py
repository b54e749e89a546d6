"""Classical one-variable constructions for ordered abelian groups and linear orders.

``chi_oag`` and ``chi_dlo`` build the quantifier-free ``χ(x̄)`` from a
conjunction of literals ``ψ(x̄, y)`` by keeping every candidate disjunction that
``ψ`` entails.  ``qe_doag`` eliminates ``∃y`` over divisible ordered abelian
groups by pairing lower and upper bounds on ``p·y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations, product
from math import gcd

from .normal_form import LinForm, form_to_term, normalize
from .oracle import decide_oag_qf, qf_counterexample
from .qf import (
    BOTTOM, TOP, And, Atom, Formula, Not, conj, disj, dlo_valid, eq, eval_dlo, implies,
    le, lt, order_types, to_dnf,
)
from .terms import E, ZERO, Bin, Var, from_la_sugar


class ClassicError(ValueError):
    pass


def literals_of(psi: Formula) -> list:
    """Flatten a conjunction of literals."""
    if isinstance(psi, And):
        out = []
        for a in psi.args:
            out.extend(literals_of(a))
        return out
    if isinstance(psi, Atom) or (isinstance(psi, Not) and isinstance(psi.arg, Atom)):
        return [psi]
    raise ClassicError(f"not a conjunction of literals: {psi}")


def _mentions(lit, y) -> bool:
    return y in lit.variables()


# --- ordered abelian groups -------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    """``lo ◁ hi`` between y-free forms, or a bound involving ``p·y``.

    ``side`` is ``"lower"`` for ``t ◁ p·y``, ``"upper"`` for ``p·y ◁ t`` and
    ``"free"`` for ``lo ◁ hi`` without y.
    """

    side: str
    strict: bool
    term: LinForm | None = None
    lo: LinForm | None = None
    hi: LinForm | None = None


def _form_pieces(f: LinForm, strict: bool, y: str):
    """``f >= 0`` (or ``f > 0``) as raw ``(c, g)`` with f = c*y + g."""
    return (f.coeff(y), f.drop(y), strict)


def _literal_disjuncts(lit, y: str):
    """DNF over raw constraints ``c*y + g ◁ 0`` for an LA literal."""
    if isinstance(lit, Not):
        a = lit.arg
        return (_literal_disjuncts(lt(a.left, a.right), y)
                + _literal_disjuncts(lt(a.right, a.left), y))
    a, b = from_la_sugar(lit.left), from_la_sugar(lit.right)
    diff = normalize(Bin("lres", a, b), "LA")  # b - a
    if lit.rel == "le":
        return [[_form_pieces(f, False, y) for f in m] for m in diff.dnf]
    if lit.rel == "lt":
        return [[_form_pieces(f, True, y) for f in m] for m in diff.dnf]
    neg = normalize(Bin("lres", b, a), "LA")  # a - b
    return [[_form_pieces(f, False, y) for f in m1] + [_form_pieces(f, False, y) for f in m2]
            for m1 in diff.dnf for m2 in neg.dnf]


def bound_disjuncts(lits, y: str):
    """``ψ`` rewritten as disjuncts of pieces over a common multiplier ``p``."""
    raw = [[]]
    for lit in lits:
        raw = [d + e for d in raw for e in _literal_disjuncts(lit, y)]
    coeffs = [abs(c) for d in raw for c, _, _ in d if c]
    p = reduce(lambda a, b: a * b // gcd(a, b), coeffs, 1)
    out = []
    for d in raw:
        pieces = []
        for c, g, strict in d:
            if c == 0:
                pieces.append(Piece("free", strict, lo=LinForm(), hi=g))  # 0 ◁ g
            elif c > 0:
                pieces.append(Piece("lower", strict, term=(-g).scale(p // c)))  # -(p/c)g ◁ py
            else:
                pieces.append(Piece("upper", strict, term=g.scale(p // -c)))  # py ◁ (p/|c|)g
        out.append(pieces)
    return p, out


def _rel_atom(lo: LinForm, hi: LinForm, strict: bool) -> Atom:
    return (lt if strict else le)(form_to_term(lo), form_to_term(hi))


def qe_doag(psi: Formula, y: str) -> Formula:
    """Quantifier-free equivalent of ``∃y.ψ`` over non-trivial divisible ordered abelian groups."""
    lits = literals_of(psi)
    _, disjuncts = bound_disjuncts(lits, y)
    out = []
    for pieces in disjuncts:
        atoms = []
        lows = [q for q in pieces if q.side == "lower"]
        ups = [q for q in pieces if q.side == "upper"]
        for q in pieces:
            if q.side == "free":
                atoms.append((q.lo, q.hi, q.strict))
        for a in lows:
            for b in ups:
                atoms.append((a.term, b.term, a.strict or b.strict))
        lits_out = []
        dead = False
        for lo, hi, strict in dict.fromkeys(atoms):
            if lo == hi:
                if strict:
                    dead = True
                continue
            lits_out.append(_rel_atom(lo, hi, strict))
        if dead:
            continue
        if not lits_out:
            return TOP
        out.append(conj(lits_out))
    if not out:
        return BOTTOM
    return disj(out)


def _terms_of(pieces) -> list:
    ts = []
    for q in pieces:
        if q.side == "free":
            ts.extend([q.lo, q.hi])
        else:
            ts.append(q.term)
    return list(dict.fromkeys(ts))


def chi_oag(psi: Formula, y: str, xs=None) -> Formula:
    lits = literals_of(psi)
    if qf_counterexample(Not(psi)) is None and not _trivially_sat(psi):
        return BOTTOM  # unsatisfiable over ordered abelian groups
    free_part = [l for l in lits if not _mentions(l, y)]
    y_part = [l for l in lits if _mentions(l, y)]
    if xs is None:
        xs = sorted(set().union(*(l.variables() for l in lits)) - {y}) if lits else []
    chi_parts: list = []
    if y_part:
        psi_y = conj(y_part)
        _, disjuncts = bound_disjuncts(y_part, y)
        per_disjunct = []
        for pieces in disjuncts:
            ts = _terms_of(pieces)
            choices = [(a, b, s) for a in ts for b in ts if a != b for s in (True, False)]
            per_disjunct.append(choices)
        seen = set()
        for choice in product(*per_disjunct):
            key = frozenset(choice)
            if key in seen:
                continue
            seen.add(key)
            cand = disj(_rel_atom(a, b, s) for a, b, s in dict.fromkeys(choice))
            if decide_oag_qf(implies(psi_y, cand)):
                chi_parts.append(cand)
        entailed_sets: list = []
        for size in range(1, len(xs) + 1):
            for idx in combinations(xs, size):
                if any(set(s) <= set(idx) for s in entailed_sets):
                    continue
                cand = disj(Not(eq(Var(x), ZERO)) for x in idx)
                if decide_oag_qf(implies(psi_y, cand)):
                    entailed_sets.append(idx)
                    chi_parts.append(cand)
    return conj(chi_parts + free_part) if (chi_parts or free_part) else TOP


def _trivially_sat(psi: Formula) -> bool:
    from .qf import trivial_value
    return trivial_value(psi)


# --- linear orders with endpoints ----------------------------------------------------

def _dlo_points(xs):
    return [Var(x) for x in xs] + [ZERO, E]


def _dlo_satisfiable(psi: Formula, nontrivial: bool = True, trivial: bool = True) -> tuple[bool, bool]:
    names = sorted(psi.variables())
    nt = any(eval_dlo(psi, r, top) for r, top in order_types(names)) if nontrivial else False
    tr = any(eval_dlo(psi, r, top) for r, top in order_types(names, trivial=True)) if trivial else False
    return nt, tr


def chi_dlo(psi: Formula, y: str, xs=None) -> Formula:
    lits = literals_of(psi)
    nt, tr = _dlo_satisfiable(psi)
    if not nt and not tr:
        return BOTTOM
    if xs is None:
        xs = sorted(psi.variables() - {y})
    one_neq_zero = Not(eq(ZERO, E))
    if not xs:
        return one_neq_zero if nt else eq(ZERO, E)
    free_part = [l for l in lits if not _mentions(l, y)]
    y_part = [l for l in lits if _mentions(l, y)]
    chi_parts: list = []
    if y_part:
        psi_y = conj(y_part)
        m = len(to_dnf(psi_y))
        pts = _dlo_points(xs)
        atoms = []
        for a, b in product(pts, pts):
            if a == b or (isinstance(a, type(ZERO)) and isinstance(b, type(ZERO))):
                continue
            atoms.append(lt(a, b))
            atoms.append(le(a, b))
        entailed: list = []
        for size in range(1, m + 1):
            for J in combinations(atoms, size):
                if any(set(s) <= set(J) for s in entailed):
                    continue
                # the same ordered pair twice in one disjunction is never needed
                if len({(a.left, a.right) for a in J}) < size:
                    continue
                if dlo_valid(implies(psi_y, disj(J))):
                    entailed.append(J)
                    chi_parts.append(disj(J))
    if not _dlo_satisfiable(psi, nontrivial=False)[1]:
        chi_parts.append(one_neq_zero)
    return conj(chi_parts + free_part) if (chi_parts or free_part) else TOP
