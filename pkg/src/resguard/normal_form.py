"""Lattice normal forms of guard-free terms over the standard models.

Every guard-free LA term denotes a piecewise-linear function that is a join of
meets (and dually a meet of joins) of homogeneous integer linear forms.  MV
terms get the same treatment with affine forms, since the Łukasiewicz
operations are truncated sums.  Both forms are carried at every node because
residuals and negation swap them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import NamedTuple, Sequence

from .terms import (
    E, LAMBDA, Bin, Conclusion, Const, Scale, Term, Un, Var, join_all, meet_all,
)


class NormalFormError(ValueError):
    pass


class LinForm(NamedTuple):
    """``sum(c*x for x, c in coeffs) + const``; coeffs sorted by name, no zeros."""

    coeffs: tuple = ()
    const: int = 0

    @staticmethod
    def var(name: str, c: int = 1) -> "LinForm":
        return LinForm(((name, c),), 0) if c else LinForm()

    @staticmethod
    def constant(c: int) -> "LinForm":
        return LinForm((), c)

    @staticmethod
    def from_dict(d: dict, const: int = 0) -> "LinForm":
        return LinForm(tuple(sorted((k, v) for k, v in d.items() if v)), const)

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __add__(self, other: "LinForm") -> "LinForm":  # type: ignore[override]
        if not other.coeffs:
            return LinForm(self.coeffs, self.const + other.const)
        if not self.coeffs:
            return LinForm(other.coeffs, self.const + other.const)
        d = dict(self.coeffs)
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) + v
        return LinForm.from_dict(d, self.const + other.const)

    def __neg__(self) -> "LinForm":
        return LinForm(tuple((k, -v) for k, v in self.coeffs), -self.const)

    def __sub__(self, other: "LinForm") -> "LinForm":
        return self + (-other)

    def scale(self, m: int) -> "LinForm":
        if m == 0:
            return LinForm()
        return LinForm(tuple((k, v * m) for k, v in self.coeffs), self.const * m)

    def coeff(self, name: str) -> int:
        for k, v in self.coeffs:
            if k == name:
                return v
        return 0

    def drop(self, name: str) -> "LinForm":
        return LinForm(tuple((k, v) for k, v in self.coeffs if k != name), self.const)

    @property
    def linear(self) -> tuple:
        return self.coeffs

    @property
    def variables(self) -> set:
        return {k for k, _ in self.coeffs}

    def evaluate(self, point) -> Fraction:
        return sum((Fraction(point[k]) * v for k, v in self.coeffs), Fraction(self.const))

    def __str__(self):
        parts = []
        for k, v in self.coeffs:
            mag = "" if abs(v) == 1 else f"{abs(v)}*"
            sign = "-" if v < 0 else "+"
            parts.append((sign, f"{mag}{k}"))
        if self.const or not parts:
            parts.append(("-" if self.const < 0 else "+", str(abs(self.const))))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


ZERO_FORM = LinForm()

Meet = tuple  # sorted tuple of LinForm, read as their minimum
Join = tuple  # sorted tuple of LinForm, read as their maximum


def _merge_same_linear(forms, keep_min: bool) -> tuple:
    best: dict = {}
    for f in forms:
        cur = best.get(f.coeffs)
        if cur is None or (f.const < cur if keep_min else f.const > cur):
            best[f.coeffs] = f.const
    return tuple(sorted(LinForm(k, c) for k, c in best.items()))


def simplify_meet(forms) -> Meet:
    return _merge_same_linear(forms, keep_min=True)


def simplify_join(forms) -> Join:
    return _merge_same_linear(forms, keep_min=False)


def _below(a: tuple, b: tuple, meet_side: bool) -> bool:
    """For meets: every form of ``b`` has a form of ``a`` with the same linear
    part and no larger constant, so min(a) <= min(b).  Dual for joins."""
    idx = {f.coeffs: f.const for f in a}
    for g in b:
        c = idx.get(g.coeffs)
        if c is None:
            return False
        if meet_side and c > g.const:
            return False
        if not meet_side and c < g.const:
            return False
    return True


def simplify_dnf(meets) -> tuple:
    """Join of meets: dedupe and drop meets dominated by another meet."""
    ms = sorted(set(simplify_meet(m) for m in meets), key=lambda m: (len(m), m))
    kept: list = []
    for m in ms:
        # m is redundant if some kept meet k satisfies min(m) <= min(k)
        if any(_below(m, k, True) for k in kept):
            continue
        kept.append(m)
    return tuple(sorted(kept))


def simplify_cnf(joins) -> tuple:
    js = sorted(set(simplify_join(j) for j in joins), key=lambda j: (len(j), j))
    kept: list = []
    for j in js:
        if any(_below(j, k, False) for k in kept):
            continue
        kept.append(j)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class NF:
    """A term's value as both a join of meets and a meet of joins."""

    dnf: tuple
    cnf: tuple

    @staticmethod
    def form(f: LinForm) -> "NF":
        return NF(((f,),), ((f,),))

    def meet(self, other: "NF") -> "NF":
        return NF(simplify_dnf(a + b for a in self.dnf for b in other.dnf),
                  simplify_cnf(self.cnf + other.cnf))

    def join(self, other: "NF") -> "NF":
        return NF(simplify_dnf(self.dnf + other.dnf),
                  simplify_cnf(a + b for a in self.cnf for b in other.cnf))

    def add(self, other: "NF") -> "NF":
        dnf = simplify_dnf(tuple(f + g for f in a for g in b) for a in self.dnf for b in other.dnf)
        cnf = simplify_cnf(tuple(f + g for f in a for g in b) for a in self.cnf for b in other.cnf)
        return NF(dnf, cnf)

    def neg(self) -> "NF":
        return NF(tuple(sorted(simplify_meet(-f for f in j) for j in self.cnf)),
                  tuple(sorted(simplify_join(-f for f in m) for m in self.dnf)))

    def scale(self, n: int) -> "NF":
        if n == 0:
            return NF.form(ZERO_FORM)
        if n < 0:
            return self.scale(-n).neg()
        return NF(tuple(tuple(f.scale(n) for f in m) for m in self.dnf),
                  tuple(tuple(f.scale(n) for f in j) for j in self.cnf))

    def evaluate(self, point) -> Fraction:
        return max(min(f.evaluate(point) for f in m) for m in self.dnf)

    def evaluate_cnf(self, point) -> Fraction:
        return min(max(f.evaluate(point) for f in j) for j in self.cnf)


@dataclass(frozen=True)
class GroupNormalForm:
    """Join of meets of homogeneous integer linear forms."""

    disjuncts: tuple

    def evaluate(self, point) -> Fraction:
        return max(min(f.evaluate(point) for f in m) for m in self.disjuncts)

    def __str__(self):
        return " | ".join("(" + " & ".join(str(f) for f in m) + ")" for m in self.disjuncts)


@dataclass(frozen=True)
class GroupConormalForm:
    """Meet of joins of homogeneous integer linear forms."""

    conjuncts: tuple

    def evaluate(self, point) -> Fraction:
        return min(max(f.evaluate(point) for f in j) for j in self.conjuncts)


def _const_nf(c: int) -> NF:
    return NF.form(LinForm.constant(c))


_MV_ONE = _const_nf(1)
_MV_ZERO = _const_nf(0)


def _mv_clamp_top(nf: NF) -> NF:
    return nf.meet(_MV_ONE)


@lru_cache(maxsize=200_000)
def _nf(t: Term, family: str) -> NF:
    if isinstance(t, Var):
        return NF.form(LinForm.var(t.name))
    if isinstance(t, Const):
        if family == "MV" and t.kind == "e":
            return _MV_ONE
        return NF.form(ZERO_FORM)
    if isinstance(t, Scale):
        if family != "LA":
            raise NormalFormError("scalar multiples exist only in LA")
        return _nf(t.arg, family).scale(t.n)
    if isinstance(t, Un):
        a = _nf(t.arg, family)
        if t.op == "neg" and family == "LA":
            return a.neg()
        if t.op == "not" and family == "MV":
            return a.neg().add(_MV_ONE)
        raise NormalFormError(f"cannot normalize {t.op!r} here (guards must be resolved first)")
    assert isinstance(t, Bin)
    if t.op == "guard":
        raise NormalFormError("guard node present; resolve guards before normalizing")
    a, b = _nf(t.left, family), _nf(t.right, family)
    op = t.op
    if op == "meet":
        return a.meet(b)
    if op == "join":
        return a.join(b)
    if family == "LA":
        if op in ("prod", "plus"):
            return a.add(b)
        if op == "lres":
            return b.add(a.neg())
        if op in ("rres", "minus"):
            return a.add(b.neg())
        raise NormalFormError(f"operation {op!r} is not an LA operation")
    if family == "MV":
        if op == "prod":
            return a.add(b).add(_const_nf(-1)).join(_MV_ZERO)
        if op == "lres":
            return _mv_clamp_top(b.add(a.neg()).add(_MV_ONE))
        if op == "rres":
            return _mv_clamp_top(a.add(b.neg()).add(_MV_ONE))
        if op == "oplus":
            return _mv_clamp_top(a.add(b))
        raise NormalFormError(f"operation {op!r} is not an MV operation")
    raise NormalFormError(f"no standard model for family {family!r}")


def normalize(t: Term, family: str = "LA") -> NF:
    return _nf(t, family)


def la_normalize(t: Term) -> GroupNormalForm:
    return GroupNormalForm(_nf(t, "LA").dnf)


def la_conormalize(t: Term) -> GroupConormalForm:
    return GroupConormalForm(_nf(t, "LA").cnf)


# --- back to terms -----------------------------------------------------------

def form_to_term(f: LinForm) -> Term:
    """Sugared LA term for a homogeneous form (the zero form is ``e``)."""
    if f.const:
        raise NormalFormError("only homogeneous forms have LA terms")
    if not f.coeffs:
        return E
    term: Term | None = None
    for name, c in f.coeffs:
        base: Term = Var(name) if abs(c) == 1 else Scale(abs(c), Var(name))
        if term is None:
            term = base if c > 0 else Un("neg", base)
        else:
            term = Bin("plus" if c > 0 else "minus", term, base)
    assert term is not None
    return term


def meet_to_term(m: Sequence[LinForm]) -> Term:
    return meet_all(form_to_term(f) for f in m)


def join_to_term(j: Sequence[LinForm] | None) -> Conclusion:
    if j is None:
        return LAMBDA
    return join_all(form_to_term(f) for f in j)


def dnf_to_term(dnf) -> Term:
    return join_all(meet_to_term(m) for m in dnf)


# --- scaling and y-uniformization ---------------------------------------------

def scale_meet_factor(meet: Sequence[LinForm], index: int, m: int) -> tuple:
    if m < 1:
        raise NormalFormError("scaling factor must be a positive integer")
    out = list(meet)
    out[index] = out[index].scale(m)
    return tuple(out)


def scale_join_branch(join: Sequence[LinForm], index: int, m: int) -> tuple:
    return scale_meet_factor(join, index, m)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class Uniform:
    """A premise meet and a conclusion join with y isolated as ``±k·y``.

    ``s0`` is a meet of y-free forms (empty means ``e``); ``s1``/``s2`` are the
    meets fused from ``+ky``/``-ky`` factors or None; ``t0`` is a join of y-free
    forms (None means LAMBDA), ``t1``/``t2`` joins or None.
    """

    k: int
    s0: tuple
    s1: tuple | None
    s2: tuple | None
    t0: tuple | None
    t1: tuple | None
    t2: tuple | None


def uniformize_y(s_meet: Sequence[LinForm], t_join: Sequence[LinForm] | None, y: str) -> Uniform:
    coeffs = [abs(f.coeff(y)) for f in s_meet] + [abs(f.coeff(y)) for f in (t_join or ())]
    k = reduce(_lcm, [c for c in coeffs if c], 1)
    s0, s1, s2 = [], [], []
    for f in s_meet:
        c = f.coeff(y)
        if c == 0:
            s0.append(f)
            continue
        g = f.scale(k // abs(c)).drop(y)
        (s1 if c > 0 else s2).append(g)
    t0 = t1 = t2 = None
    if t_join is not None:
        b0, b1, b2 = [], [], []
        for f in t_join:
            c = f.coeff(y)
            if c == 0:
                b0.append(f)
                continue
            g = f.scale(k // abs(c)).drop(y)
            (b1 if c > 0 else b2).append(g)
        t0 = simplify_join(b0) if b0 else None
        t1 = simplify_join(b1) if b1 else None
        t2 = simplify_join(b2) if b2 else None
    return Uniform(k, simplify_meet(s0),
                   simplify_meet(s1) if s1 else None,
                   simplify_meet(s2) if s2 else None,
                   t0, t1, t2)


def uniform_to_terms(u: Uniform, y: str) -> tuple[Term, Conclusion]:
    """Reassemble ``s0 ∧ (s1+ky) ∧ (s2-ky)`` and ``t0 ∨ (t1+ky) ∨ (t2-ky)``."""
    ky = LinForm.var(y, u.k)
    s_parts = list(u.s0)
    if u.s1 is not None:
        s_parts += [f + ky for f in u.s1]
    if u.s2 is not None:
        s_parts += [f - ky for f in u.s2]
    t_parts = None
    if u.t0 is not None or u.t1 is not None or u.t2 is not None:
        t_parts = list(u.t0 or ())
        t_parts += [f + ky for f in (u.t1 or ())]
        t_parts += [f - ky for f in (u.t2 or ())]
    return meet_to_term(s_parts), join_to_term(t_parts)


# --- MV case splitting --------------------------------------------------------

@dataclass(frozen=True)
class MvPiece:
    """On the region cut out by ``guards`` (over [0,1]^n) the term equals ``value``."""

    guards: tuple  # LinearConstraint tuple
    value: LinForm


def mv_pieces(t: Term) -> list[MvPiece]:
    """Split an MV term into affine pieces, one binary split per truncation.

    Boundaries belong to both sides, so pieces overlap only where their values
    agree.  Exponential in the number of truncating operations.
    """
    from .fm import LinearConstraint, ConstraintSystem, fm_feasible

    def ge(f: LinForm, g: LinForm):
        d = f - g
        return LinearConstraint.make(d.as_dict(), -d.const, strict=False)

    def feasible(guards):
        names = sorted({v for c in guards for v in c.variables})
        return fm_feasible(ConstraintSystem(tuple(guards), box=tuple(names))).feasible

    def combine(pa, pb, fn):
        out = []
        for ga, va in pa:
            for gb, vb in pb:
                for g, v in fn(va, vb):
                    gs = ga + gb + g
                    if feasible(gs):
                        out.append((gs, v))
        return out

    def walk(t: Term):
        if isinstance(t, Var):
            return [((), LinForm.var(t.name))]
        if isinstance(t, Const):
            return [((), LinForm.constant(1 if t.kind == "e" else 0))]
        if isinstance(t, Un) and t.op == "not":
            return [(g, LinForm.constant(1) - v) for g, v in walk(t.arg)]
        if not isinstance(t, Bin) or t.op == "guard":
            raise NormalFormError(f"mv_pieces cannot handle {t!r}")
        one, zero = LinForm.constant(1), LinForm.constant(0)
        op = t.op
        if op == "meet":
            fn = lambda a, b: [((ge(b, a),), a), ((ge(a, b),), b)]
        elif op == "join":
            fn = lambda a, b: [((ge(a, b),), a), ((ge(b, a),), b)]
        elif op == "prod":
            fn = lambda a, b: [((ge(a + b, one),), a + b - one), ((ge(one, a + b),), zero)]
        elif op == "lres":
            fn = lambda a, b: [((ge(a, b),), one - a + b), ((ge(b, a),), one)]
        elif op == "rres":
            fn = lambda a, b: [((ge(b, a),), one + a - b), ((ge(a, b),), one)]
        elif op == "oplus":
            fn = lambda a, b: [((ge(one, a + b),), a + b), ((ge(a + b, one),), one)]
        else:
            raise NormalFormError(f"operation {op!r} is not an MV operation")
        return combine(walk(t.left), walk(t.right), fn)

    return [MvPiece(tuple(g), v) for g, v in walk(t)]
