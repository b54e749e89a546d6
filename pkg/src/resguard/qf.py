"""Quantifier-free formulas over LA terms (or over variables with 0, 1 for linear orders)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .syntax import ParseError, TermParser, Token, print_term, tokenize
from .terms import E, ZERO, Bin, Const, Signature, Term, Var, free_vars


class Formula:
    def variables(self) -> set:
        raise NotImplementedError

    def __and__(self, other):
        return conj([self, other])

    def __or__(self, other):
        return disj([self, other])

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    rel: str  # "eq" | "le" | "lt"
    left: Term
    right: Term

    def variables(self):
        return free_vars(self.left) | free_vars(self.right)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def variables(self):
        return self.arg.variables()


@dataclass(frozen=True)
class And(Formula):
    args: tuple

    def variables(self):
        return set().union(*(a.variables() for a in self.args)) if self.args else set()


@dataclass(frozen=True)
class Or(Formula):
    args: tuple

    def variables(self):
        return set().union(*(a.variables() for a in self.args)) if self.args else set()


TOP = And(())
BOTTOM = Or(())


def conj(fs: Iterable[Formula]) -> Formula:
    out = []
    for f in fs:
        if isinstance(f, And):
            out.extend(f.args)
        else:
            out.append(f)
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(fs: Iterable[Formula]) -> Formula:
    out = []
    for f in fs:
        if isinstance(f, Or):
            out.extend(f.args)
        else:
            out.append(f)
    return out[0] if len(out) == 1 else Or(tuple(out))


def implies(a: Formula, b: Formula) -> Formula:
    return disj([Not(a), b])


def iff(a: Formula, b: Formula) -> Formula:
    return conj([implies(a, b), implies(b, a)])


def eq(a, b):
    return Atom("eq", a, b)


def le(a, b):
    return Atom("le", a, b)


def lt(a, b):
    return Atom("lt", a, b)


# --- normal forms --------------------------------------------------------------

def _nnf(f: Formula, positive: bool = True):
    """Yield a formula with negation only on 'eq' atoms."""
    if isinstance(f, Atom):
        if positive:
            return f
        if f.rel == "le":
            return Atom("lt", f.right, f.left)
        if f.rel == "lt":
            return Atom("le", f.right, f.left)
        return Not(f)
    if isinstance(f, Not):
        return _nnf(f.arg, not positive)
    if isinstance(f, And):
        parts = [_nnf(a, positive) for a in f.args]
        return And(tuple(parts)) if positive else Or(tuple(parts))
    if isinstance(f, Or):
        parts = [_nnf(a, positive) for a in f.args]
        return Or(tuple(parts)) if positive else And(tuple(parts))
    raise TypeError(f"not a formula: {f!r}")


def nnf(f: Formula) -> Formula:
    return _nnf(f)


def to_dnf(f: Formula) -> list[list[Formula]]:
    """List of conjunctions of literals (atoms or negated equations)."""
    g = nnf(f)

    def walk(h):
        if isinstance(h, (Atom, Not)):
            return [[h]]
        if isinstance(h, Or):
            return [c for a in h.args for c in walk(a)]
        out = [[]]
        for a in h.args:
            out = [x + y for x in out for y in walk(a)]
        return out

    return walk(g)


# --- LA semantics ------------------------------------------------------------------

def _diff(a: Term, b: Term) -> Term:
    """``b - a`` as a core LA term."""
    return Bin("lres", a, b)


def literal_constraints(lit: Formula) -> tuple:
    """Alternative constraint tuples for an LA literal over ℝ."""
    from .oracle import atom_alternatives
    from .terms import from_la_sugar

    if isinstance(lit, Not):
        a = lit.arg
        return literal_constraints(Atom("lt", a.left, a.right)) + literal_constraints(Atom("lt", a.right, a.left))
    a, b = from_la_sugar(lit.left), from_la_sugar(lit.right)
    if lit.rel == "le":
        return atom_alternatives(_diff(a, b), "LA", True)
    if lit.rel == "lt":
        return atom_alternatives(_diff(b, a), "LA", False)
    first = atom_alternatives(_diff(a, b), "LA", True)
    second = atom_alternatives(_diff(b, a), "LA", True)
    return tuple(x + y for x in first for y in second)


def eval_la(f: Formula, point) -> bool:
    from .oracle import evaluate

    if isinstance(f, Atom):
        x, y = evaluate(f.left, point, "LA"), evaluate(f.right, point, "LA")
        return {"eq": x == y, "le": x <= y, "lt": x < y}[f.rel]
    if isinstance(f, Not):
        return not eval_la(f.arg, point)
    if isinstance(f, And):
        return all(eval_la(a, point) for a in f.args)
    return any(eval_la(a, point) for a in f.args)


def trivial_value(f: Formula) -> bool:
    """Truth in the one-element algebra, where every term denotes the same element."""
    if isinstance(f, Atom):
        return f.rel != "lt"
    if isinstance(f, Not):
        return not trivial_value(f.arg)
    if isinstance(f, And):
        return all(trivial_value(a) for a in f.args)
    return any(trivial_value(a) for a in f.args)


# --- linear orders with endpoints ----------------------------------------------------

def dlo_rank(t: Term, ranks: dict, top: int) -> int:
    if isinstance(t, Var):
        return ranks[t.name]
    if isinstance(t, Const):
        return top if t.kind == "e" else 0
    raise ValueError(f"{t!r} is not a variable or endpoint")


def eval_dlo(f: Formula, ranks: dict, top: int) -> bool:
    if isinstance(f, Atom):
        x, y = dlo_rank(f.left, ranks, top), dlo_rank(f.right, ranks, top)
        return {"eq": x == y, "le": x <= y, "lt": x < y}[f.rel]
    if isinstance(f, Not):
        return not eval_dlo(f.arg, ranks, top)
    if isinstance(f, And):
        return all(eval_dlo(a, ranks, top) for a in f.args)
    return any(eval_dlo(a, ranks, top) for a in f.args)


def order_types(names, trivial: bool = False):
    """Every placement of ``names`` into a finite chain with endpoints.

    Ranks run over 0..top; with ``trivial`` the chain has a single element
    (0 = 1).  Placements with distinct interior ranks cover all order types up
    to the density of the order, which is all a universal sentence can see.
    """
    names = list(names)
    if trivial:
        yield {n: 0 for n in names}, 0
        return
    n = len(names)
    top = n + 1
    for ranks in product(range(top + 1), repeat=n):
        used = sorted(set(r for r in ranks if 0 < r < top))
        # only canonical placements: interior ranks are 1..m without gaps
        if used != list(range(1, len(used) + 1)):
            continue
        m = len(used)
        tt = m + 1
        yield {nm: (tt if r == top else r) for nm, r in zip(names, ranks)}, tt


def dlo_valid(f: Formula, include_trivial: bool = True) -> bool:
    names = sorted(f.variables())
    for ranks, top in order_types(names):
        if not eval_dlo(f, ranks, top):
            return False
    if include_trivial:
        for ranks, top in order_types(names, trivial=True):
            if not eval_dlo(f, ranks, top):
                return False
    return True


# --- text --------------------------------------------------------------------------

_REL_SYM = {"eq": "=", "le": "<=", "lt": "<"}


def _term_text(t: Term, dlo: bool) -> str:
    if dlo and isinstance(t, Const):
        return "1" if t.kind == "e" else "0"
    s = print_term(t)
    return s


def print_formula(f: Formula, dlo: bool = False) -> str:
    if isinstance(f, Atom):
        return f"{_term_text(f.left, dlo)} {_REL_SYM[f.rel]} {_term_text(f.right, dlo)}"
    if isinstance(f, Not):
        if isinstance(f.arg, Atom) and f.arg.rel == "eq":
            return f"{_term_text(f.arg.left, dlo)} != {_term_text(f.arg.right, dlo)}"
        return f"!({print_formula(f.arg, dlo)})"
    if isinstance(f, And):
        if not f.args:
            return "TRUE"
        return " && ".join(_wrap(a, dlo, And) for a in f.args)
    if not f.args:
        return "FALSE"
    return " || ".join(_wrap(a, dlo, Or) for a in f.args)


def _wrap(a, dlo, parent):
    s = print_formula(a, dlo)
    if isinstance(a, (And, Or)) and a.args and not isinstance(a, parent):
        return f"({s})"
    return s


class FormulaParser:
    """``->`` (right-assoc) < ``||`` < ``&&`` < ``!`` < atoms; relations ``= != <= < >= >``."""

    RELS = {"=", "!=", "<=", "<", ">=", ">"}

    def __init__(self, src: str, sig: Signature = Signature.LA, dlo: bool = False):
        self.toks = tokenize(src, formula=True)
        self.pos = 0
        self.sig = sig
        self.dlo = dlo

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg, expected=()):
        raise ParseError(msg, self.tok.line, self.tok.col, expected)

    def is_sym(self, text) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    def parse(self) -> Formula:
        f = self.implication()
        if self.tok.kind != "eof":
            self.error(f"unexpected token {self.tok.text!r}", ["&&", "||", "->", "end of input"])
        return f

    def implication(self):
        left = self.disjunction()
        if self.is_sym("->"):
            self.pos += 1
            return implies(left, self.implication())
        return left

    def disjunction(self):
        parts = [self.conjunction()]
        while self.is_sym("||"):
            self.pos += 1
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self):
        parts = [self.negation()]
        while self.is_sym("&&"):
            self.pos += 1
            parts.append(self.negation())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def negation(self):
        if self.is_sym("!"):
            self.pos += 1
            return Not(self.negation())
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "kw" and t.text in ("TRUE", "FALSE"):
            self.pos += 1
            return TOP if t.text == "TRUE" else BOTTOM
        start = self.pos
        try:
            return self.literal()
        except ParseError:
            if not self.is_sym("("):
                raise
            self.pos = start + 1
            inner = self.implication()
            if not self.is_sym(")"):
                self.error("unbalanced parenthesis", [")"])
            self.pos += 1
            return inner

    def term(self) -> Term:
        if self.dlo:
            t = self.tok
            if t.kind == "ident" and t.text != "e":
                self.pos += 1
                return Var(t.text)
            if t.kind == "int" and t.text in ("0", "1"):
                self.pos += 1
                return ZERO if t.text == "0" else E
            self.error("expected a variable, 0 or 1", ["identifier", "0", "1"])
        p = TermParser(self.toks, self.sig, self.pos)
        term = p.parse()
        self.pos = p.pos
        return term

    def literal(self) -> Formula:
        left = self.term()
        if not (self.tok.kind == "sym" and self.tok.text in self.RELS):
            self.error("expected a relation", sorted(self.RELS))
        rel = self.tok.text
        self.pos += 1
        right = self.term()
        if rel == "=":
            return Atom("eq", left, right)
        if rel == "!=":
            return Not(Atom("eq", left, right))
        if rel == "<=":
            return Atom("le", left, right)
        if rel == "<":
            return Atom("lt", left, right)
        if rel == ">=":
            return Atom("le", right, left)
        return Atom("lt", right, left)


def parse_formula(src: str, sig: Signature | str = Signature.LA, dlo: bool = False) -> Formula:
    if isinstance(sig, str):
        sig = Signature.parse(sig)
    return FormulaParser(src, sig, dlo).parse()
