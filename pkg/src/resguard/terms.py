"""Terms over pointed residuated lattices, optionally extended with the guard.

Core nodes are :class:`Var`, :class:`Const` and :class:`Bin` (ops ``meet``,
``join``, ``prod``, ``lres``, ``rres``, ``guard``).  Sugar layers for
lattice-ordered groups (``plus``, ``minus``, ``neg``, :class:`Scale`) and for
MV-algebras (``oplus``, ``not``, ``delta``) reuse the same node classes so that
a single evaluator and printer can handle both; :func:`desugar` maps them back
into the core language.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

CORE_OPS = ("meet", "join", "prod", "lres", "rres")
BIN_OPS = CORE_OPS + ("guard", "plus", "minus", "oplus")
UN_OPS = ("neg", "not", "delta")


class Signature(enum.Enum):
    LA = "LA"
    LA_GUARD = "LA_GUARD"
    MV = "MV"
    MV_GUARD = "MV_GUARD"
    PRL = "PRL"
    PRL_GUARD = "PRL_GUARD"

    @property
    def guarded(self) -> bool:
        return self.value.endswith("_GUARD")

    @property
    def family(self) -> str:
        return self.value.split("_")[0]

    def with_guard(self) -> "Signature":
        return Signature(self.family + "_GUARD")

    def without_guard(self) -> "Signature":
        return Signature(self.family)

    @classmethod
    def parse(cls, tag: str) -> "Signature":
        try:
            return cls(tag.upper())
        except ValueError:
            raise ValueError(f"unknown signature {tag!r}") from None


class SignatureError(ValueError):
    """An operation was used outside the signatures that allow it."""


class Term:
    __slots__ = ()

    # Operator sugar for building terms in Python code and tests.
    def __and__(self, other: "Term") -> "Term":
        return Bin("meet", self, other)

    def __or__(self, other: "Term") -> "Term":
        return Bin("join", self, other)

    def __mul__(self, other: "Term") -> "Term":
        return Bin("prod", self, other)

    def __rshift__(self, other: "Term") -> "Term":
        return Bin("guard", self, other)

    def __str__(self) -> str:
        from .syntax import print_term

        return print_term(self)


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Const(Term):
    kind: str  # "e" or "0"

    def __post_init__(self):
        if self.kind not in ("e", "0"):
            raise ValueError(f"unknown constant {self.kind!r}")

    def __repr__(self):
        return "E" if self.kind == "e" else "ZERO"


@dataclass(frozen=True, repr=False)
class Bin(Term):
    op: str
    left: Term
    right: Term
    _hash: int = field(default=0, init=False, compare=False)

    def __post_init__(self):
        if self.op not in BIN_OPS:
            raise ValueError(f"unknown binary operation {self.op!r}")
        # deep trees get hashed a lot by the normal-form caches
        object.__setattr__(self, "_hash", hash((self.op, self.left, self.right)))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Bin({self.op!r}, {self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Un(Term):
    op: str
    arg: Term

    def __post_init__(self):
        if self.op not in UN_OPS:
            raise ValueError(f"unknown unary operation {self.op!r}")

    def __repr__(self):
        return f"Un({self.op!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Scale(Term):
    """Integer multiple ``n*t`` (lattice-ordered group sugar)."""

    n: int
    arg: Term

    def __repr__(self):
        return f"Scale({self.n}, {self.arg!r})"


E = Const("e")
ZERO = Const("0")


class Absent(enum.Enum):
    """The marker for an absent conclusion; the unit of join."""

    LAMBDA = "LAMBDA"

    def __repr__(self):
        return "LAMBDA"

    def __str__(self):
        return "LAMBDA"


LAMBDA = Absent.LAMBDA
Conclusion = Union[Term, Absent]


def meet(a: Term, b: Term) -> Term:
    return Bin("meet", a, b)


def join(a: Term, b: Term) -> Term:
    return Bin("join", a, b)


def prod(a: Term, b: Term) -> Term:
    return Bin("prod", a, b)


def lres(a: Term, b: Term) -> Term:
    return Bin("lres", a, b)


def rres(a: Term, b: Term) -> Term:
    return Bin("rres", a, b)


def guard(a: Term, b: Term) -> Term:
    return Bin("guard", a, b)


def variables(*names: str) -> tuple[Var, ...]:
    return tuple(Var(n) for n in names)


def meet_all(terms: Iterable[Term]) -> Term:
    """Right-folded meet; the empty meet is ``e``."""
    terms = list(terms)
    if not terms:
        return E
    acc = terms[-1]
    for t in reversed(terms[:-1]):
        acc = Bin("meet", t, acc)
    return acc


def join_all(terms: Iterable[Conclusion]) -> Conclusion:
    """Right-folded join skipping LAMBDA; the empty join is LAMBDA."""
    terms = [t for t in terms if t is not LAMBDA]
    if not terms:
        return LAMBDA
    acc = terms[-1]
    for t in reversed(terms[:-1]):
        acc = Bin("join", t, acc)
    return acc


def join_conclusion(a: Conclusion, b: Conclusion) -> Conclusion:
    if a is LAMBDA:
        return b
    if b is LAMBDA:
        return a
    return Bin("join", a, b)


@dataclass(frozen=True)
class VarContext:
    """Declared variables: kept ``xs``, an optional eliminable ``y`` and parameters ``zs``."""

    xs: tuple[str, ...] = ()
    eliminable: str | None = None
    params: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))
        object.__setattr__(self, "params", tuple(self.params))
        seen = list(self.xs) + list(self.params)
        if self.eliminable is not None:
            seen.append(self.eliminable)
        if len(set(seen)) != len(seen):
            raise ValueError(f"variable groups are not disjoint: {seen}")

    @property
    def all_vars(self) -> tuple[str, ...]:
        ys = (self.eliminable,) if self.eliminable is not None else ()
        return self.xs + ys + self.params

    def check_declared(self, *terms: Conclusion) -> None:
        declared = set(self.all_vars)
        for t in terms:
            if t is LAMBDA:
                continue
            missing = free_vars(t) - declared
            if missing:
                raise UndeclaredVariable(sorted(missing))

    @classmethod
    def infer(cls, *terms: Conclusion, eliminable: str | None = None) -> "VarContext":
        names: set[str] = set()
        for t in terms:
            if t is not LAMBDA:
                names |= free_vars(t)
        names.discard(eliminable)
        return cls(tuple(sorted(names)), eliminable)


class UndeclaredVariable(ValueError):
    def __init__(self, names: Sequence[str]):
        self.names = list(names)
        super().__init__(f"undeclared variable(s): {', '.join(self.names)}")


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, Bin):
        return (t.left, t.right)
    if isinstance(t, (Un, Scale)):
        return (t.arg,)
    return ()


def rebuild(t: Term, kids: Sequence[Term]) -> Term:
    if isinstance(t, Bin):
        return Bin(t.op, kids[0], kids[1])
    if isinstance(t, Un):
        return Un(t.op, kids[0])
    if isinstance(t, Scale):
        return Scale(t.n, kids[0])
    return t


def free_vars(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.name)
        else:
            stack.extend(children(node))
    return out


def subterms(t: Term):
    """Post-order traversal, left to right."""
    for c in children(t):
        yield from subterms(c)
    yield t


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def count_guards(t: Conclusion) -> int:
    if t is LAMBDA:
        return 0
    return sum(1 for n in subterms(t) if isinstance(n, Bin) and n.op == "guard")


def has_guard(t: Conclusion) -> bool:
    return count_guards(t) > 0


def is_core(t: Term) -> bool:
    return all(isinstance(n, (Var, Const)) or (isinstance(n, Bin) and n.op in CORE_OPS + ("guard",))
               for n in subterms(t))


def substitute(t: Term, m: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return m.get(t.name, t)
    kids = children(t)
    if not kids:
        return t
    new = [substitute(c, m) for c in kids]
    if all(a is b for a, b in zip(new, kids)):
        return t
    return rebuild(t, new)


def equiv(s: Term, t: Term) -> Term:
    """``s ≡ t`` := (s\\t) ∧ (t\\s) ∧ e."""
    return meet(meet(lres(s, t), lres(t, s)), E)


def power(t: Term, n: int) -> Term:
    """``t^0 = e`` and ``t^(n+1) = t·t^n``."""
    if n < 0:
        raise ValueError("power exponent must be non-negative")
    acc: Term = E
    for _ in range(n):
        acc = prod(t, acc)
    return acc


def nabla(s: Conclusion, ctx: VarContext | Sequence[str], sig: Signature | None = None) -> Term:
    """``s ⊳ ((0≡e) ∧ ⋀_j (x_j≡e))`` over the kept variables; ``∇Λ = e``."""
    if sig is not None and not sig.guarded:
        raise SignatureError(f"nabla needs a guarded signature, got {sig.value}")
    if s is LAMBDA:
        return E
    xs = ctx.xs if isinstance(ctx, VarContext) else tuple(ctx)
    body = equiv(ZERO, E)
    for x in xs:
        body = meet(body, equiv(Var(x), E))
    return guard(s, body)


# --- sugar -----------------------------------------------------------------

def _summands(t: Term) -> list[Term]:
    """Flatten a plus/minus chain into desugared summands."""
    if isinstance(t, Bin) and t.op == "plus":
        return _summands(t.left) + _summands(t.right)
    if isinstance(t, Bin) and t.op == "minus":
        return _summands(t.left) + [lres(from_la_sugar(t.right), E)]
    return [from_la_sugar(t)]


def _sum(terms: Sequence[Term]) -> Term:
    if not terms:
        return E
    acc = terms[-1]
    for t in reversed(terms[:-1]):
        acc = prod(t, acc)
    return acc


def from_la_sugar(t: Term) -> Term:
    """Translate ``+``, ``-``, unary minus and integer multiples into the core language."""
    if isinstance(t, Bin) and t.op in ("plus", "minus"):
        return _sum(_summands(t))
    if isinstance(t, Un) and t.op == "neg":
        return lres(from_la_sugar(t.arg), E)
    if isinstance(t, Scale):
        if t.n < 0:
            return lres(from_la_sugar(Scale(-t.n, t.arg)), E)
        return _sum([from_la_sugar(t.arg)] * t.n)
    if isinstance(t, (Un,)) or (isinstance(t, Bin) and t.op == "oplus"):
        raise SignatureError(f"MV sugar {t.op!r} in a lattice-ordered group term")
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, [from_la_sugar(c) for c in kids])


def to_la_sugar(t: Term) -> Term:
    """Present a core term with group notation: ``·`` as ``+``, residuals as differences."""
    if isinstance(t, Bin):
        left, right = to_la_sugar(t.left), to_la_sugar(t.right)
        if t.op == "prod":
            return Bin("plus", left, right)
        if t.op == "lres":
            if t.right == E:
                return Un("neg", left)
            return Bin("minus", right, left)
        if t.op == "rres":
            return Bin("minus", left, right)
        return Bin(t.op, left, right)
    return t


def mv_delta_expand(t: Term) -> Term:
    """Replace every ``Δa`` by ``(a ⊳ 0) ⊳ 0``."""
    if isinstance(t, Un) and t.op == "delta":
        a = mv_delta_expand(t.arg)
        return guard(guard(a, ZERO), ZERO)
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, [mv_delta_expand(c) for c in kids])


def mv_delta_introduce(t: Term) -> Term:
    """Replace every ``a ⊳ b`` by ``¬Δa ⊕ b``, keeping Δ as a node."""
    if isinstance(t, Bin) and t.op == "guard":
        a, b = mv_delta_introduce(t.left), mv_delta_introduce(t.right)
        return Bin("oplus", Un("not", Un("delta", a)), b)
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, [mv_delta_introduce(c) for c in kids])


def from_mv_sugar(t: Term) -> Term:
    """``¬a := a\\0``, ``a⊕b := (a\\0)\\b``, ``Δa := (a⊳0)⊳0``."""
    if isinstance(t, Un) and t.op == "not":
        return lres(from_mv_sugar(t.arg), ZERO)
    if isinstance(t, Bin) and t.op == "oplus":
        return lres(lres(from_mv_sugar(t.left), ZERO), from_mv_sugar(t.right))
    if isinstance(t, Un) and t.op == "delta":
        a = from_mv_sugar(t.arg)
        return guard(guard(a, ZERO), ZERO)
    if isinstance(t, (Un, Scale)) or (isinstance(t, Bin) and t.op in ("plus", "minus")):
        raise SignatureError("group sugar in an MV term")
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, [from_mv_sugar(c) for c in kids])


def desugar(t: Term, sig: Signature) -> Term:
    if sig.family == "LA":
        return from_la_sugar(t)
    if sig.family == "MV":
        return from_mv_sugar(t)
    if not is_core(t):
        raise SignatureError(f"sugar is not available in {sig.value}")
    return t


def check_signature(t: Conclusion, sig: Signature) -> None:
    if t is LAMBDA:
        return
    if not sig.guarded and has_guard(t):
        raise SignatureError(f"guard used in non-guarded signature {sig.value}")
