"""Finite pointed residuated lattices given by operation tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path

OPS = ("meet", "join", "prod", "lres", "rres")


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteAlgebra:
    elements: tuple
    e: int
    zero: int
    meet: tuple
    join: tuple
    prod: tuple
    lres: tuple
    rres: tuple
    guard: tuple | None = None

    def __post_init__(self):
        n = len(self.elements)
        if not (0 <= self.e < n and 0 <= self.zero < n):
            raise AlgebraError("designated elements out of range")
        for name in OPS + (("guard",) if self.guard is not None else ()):
            tab = getattr(self, name)
            if len(tab) != n or any(len(row) != n for row in tab):
                raise AlgebraError(f"table {name} is not {n}x{n}")
            if any(not (0 <= v < n) for row in tab for v in row):
                raise AlgebraError(f"table {name} has entries out of range")

    @property
    def n(self) -> int:
        return len(self.elements)

    def leq(self, a: int, b: int) -> bool:
        return self.meet[a][b] == a

    def equiv(self, a: int, b: int) -> int:
        """``(a\\b) ∧ (b\\a) ∧ e``."""
        return self.meet[self.meet[self.lres[a][b]][self.lres[b][a]]][self.e]

    def power(self, a: int, k: int) -> int:
        acc = self.e
        for _ in range(k):
            acc = self.prod[a][acc]
        return acc

    def index(self, name) -> int:
        return self.elements.index(name)

    # --- serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        out = {"elements": list(self.elements), "e": self.e, "zero": self.zero}
        for name in OPS:
            out[name] = [list(r) for r in getattr(self, name)]
        if self.guard is not None:
            out["guard"] = [list(r) for r in self.guard]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FiniteAlgebra":
        try:
            tabs = {k: tuple(tuple(int(v) for v in row) for row in data[k]) for k in OPS}
            guard = data.get("guard")
            if guard is not None:
                guard = tuple(tuple(int(v) for v in row) for row in guard)
            return cls(tuple(str(x) for x in data["elements"]), int(data["e"]), int(data["zero"]),
                       guard=guard, **tabs)
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed algebra description: {exc}") from None

    @classmethod
    def load(cls, path) -> "FiniteAlgebra":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def _table(n, fn):
    return tuple(tuple(fn(a, b) for b in range(n)) for a in range(n))


def lukasiewicz(n: int) -> FiniteAlgebra:
    """The n-element Łukasiewicz chain {0, 1/(n-1), ..., 1}."""
    if n < 2:
        raise AlgebraError("a Łukasiewicz chain needs at least two elements")
    m = n - 1
    names = tuple(str(Fraction(i, m)) for i in range(n))
    guard = _table(n, lambda a, b: b if a == m else m)
    return FiniteAlgebra(
        names, e=m, zero=0,
        meet=_table(n, min), join=_table(n, max),
        prod=_table(n, lambda a, b: max(0, a + b - m)),
        lres=_table(n, lambda a, b: min(m, m - a + b)),
        rres=_table(n, lambda a, b: min(m, a - b + m)),
        guard=guard,
    )


def boolean2() -> FiniteAlgebra:
    return lukasiewicz(2)


def goedel_chain(n: int = 3) -> FiniteAlgebra:
    m = n - 1
    impl = lambda a, b: m if a <= b else b
    return FiniteAlgebra(
        tuple(str(Fraction(i, m)) for i in range(n)), e=m, zero=0,
        meet=_table(n, min), join=_table(n, max), prod=_table(n, min),
        lres=_table(n, impl), rres=_table(n, lambda a, b: impl(b, a)),
        guard=_table(n, lambda a, b: b if a == m else m),
    )


def chain_from_product(prod: list, e: int, zero: int = 0) -> FiniteAlgebra | None:
    """Residuated chain 0 < 1 < ... < n-1 from a product table, or None if the
    product is not residuated (residuals are read off as maxima)."""
    n = len(prod)
    lres, rres = [], []
    for a in range(n):
        lrow, rrow = [], []
        for c in range(n):
            lb = [b for b in range(n) if prod[a][b] <= c]
            rb = [b for b in range(n) if prod[b][a] <= c]
            if not lb or not rb:
                return None
            lrow.append(max(lb))
            rrow.append(max(rb))
        lres.append(tuple(lrow))
        rres.append(tuple(rrow))
    # rres[c][b] is c/b: largest a with a*b <= c; transpose the per-b rows
    rres_t = tuple(tuple(rres[b][c] for b in range(n)) for c in range(n))
    alg = FiniteAlgebra(tuple(str(i) for i in range(n)), e, zero, _table(n, min), _table(n, max),
                        tuple(tuple(r) for r in prod), tuple(lres), rres_t)
    return alg if validate(alg).ok else None


# --- axioms --------------------------------------------------------------------------

@dataclass
class Report:
    checks: dict = field(default_factory=dict)  # name -> None (pass) or counterexample tuple

    @property
    def ok(self) -> bool:
        return all(v is None for v in self.checks.values())

    def failures(self) -> dict:
        return {k: v for k, v in self.checks.items() if v is not None}


def _first(it):
    for x in it:
        return x
    return None


def validate(A: FiniteAlgebra, commutative: bool = False, mv: bool = False) -> Report:
    n = range(A.n)
    M, J, P, L, R = A.meet, A.join, A.prod, A.lres, A.rres
    r = Report()
    r.checks["lattice: idempotent"] = _first(a for a in n if M[a][a] != a or J[a][a] != a)
    r.checks["lattice: commutative"] = _first((a, b) for a, b in product(n, n)
                                              if M[a][b] != M[b][a] or J[a][b] != J[b][a])
    r.checks["lattice: associative"] = _first((a, b, c) for a, b, c in product(n, n, n)
                                              if M[M[a][b]][c] != M[a][M[b][c]] or J[J[a][b]][c] != J[a][J[b][c]])
    r.checks["lattice: absorption"] = _first((a, b) for a, b in product(n, n)
                                             if M[a][J[a][b]] != a or J[a][M[a][b]] != a)
    r.checks["monoid: associative"] = _first((a, b, c) for a, b, c in product(n, n, n)
                                             if P[P[a][b]][c] != P[a][P[b][c]])
    r.checks["monoid: unit"] = _first(a for a in n if P[A.e][a] != a or P[a][A.e] != a)
    r.checks["residuation"] = _first(
        (a, b, c) for a, b, c in product(n, n, n)
        if not (A.leq(b, L[a][c]) == A.leq(P[a][b], c) == A.leq(a, R[c][b])))
    if commutative:
        r.checks["commutative"] = _first((a, b) for a, b in product(n, n) if P[a][b] != P[b][a])
    if mv:
        # x⊕y := ¬(¬x·¬y) with ¬x := x\0; top is e
        neg = [L[a][A.zero] for a in n]
        plus = lambda a, b: neg[P[neg[a]][neg[b]]]
        zero = A.zero
        r.checks["MV1"] = _first((a, b, c) for a, b, c in product(n, n, n)
                                 if plus(a, plus(b, c)) != plus(plus(a, b), c))
        r.checks["MV2"] = _first((a, b) for a, b in product(n, n) if plus(a, b) != plus(b, a))
        r.checks["MV3"] = _first(a for a in n if plus(a, zero) != a)
        r.checks["MV4"] = _first(a for a in n if neg[neg[a]] != a)
        r.checks["MV5"] = _first(a for a in n if plus(a, neg[zero]) != neg[zero])
        r.checks["MV6"] = _first((a, b) for a, b in product(n, n)
                                 if plus(neg[plus(neg[a], b)], b) != plus(neg[plus(neg[b], a)], a))
    return r


def is_hamiltonian(A: FiniteAlgebra, k: int = 1):
    """``(x∧e)^k·y ≈ y·(x∧e)^k``; returns True or a failing pair ``(x, y)``."""
    if k < 1:
        raise AlgebraError("k must be at least 1")
    for a in range(A.n):
        p = A.power(A.meet[a][A.e], k)
        for b in range(A.n):
            if A.prod[p][b] != A.prod[b][p]:
                return (a, b)
    return True


def hamiltonian_exponent(A: FiniteAlgebra, max_k: int | None = None) -> int | None:
    for k in range(1, (max_k or A.n + 1) + 1):
        if is_hamiltonian(A, k) is True:
            return k
    return None


# --- congruences ------------------------------------------------------------------------

class Congruence:
    """Partition of the universe, stored as a union-find forest."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def related(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def blocks(self) -> list:
        out: dict = {}
        for a in range(len(self.parent)):
            out.setdefault(self.find(a), []).append(a)
        return sorted(out.values())

    def pairs(self) -> set:
        n = len(self.parent)
        return {(a, b) for a in range(n) for b in range(n) if self.related(a, b)}

    def is_compatible(self, A: FiniteAlgebra) -> bool:
        tabs = [getattr(A, op) for op in OPS] + ([A.guard] if A.guard is not None else [])
        n = A.n
        for tab in tabs:
            for a, b in product(range(n), range(n)):
                if not self.related(a, b):
                    continue
                for c in range(n):
                    if not self.related(tab[a][c], tab[b][c]) or not self.related(tab[c][a], tab[c][b]):
                        return False
        return True


def cg_bruteforce(A: FiniteAlgebra, b1: int, b2: int, with_guard: bool = False) -> Congruence:
    """Least congruence containing (b1, b2): close under the basic translations."""
    theta = Congruence(A.n)
    theta.union(b1, b2)
    tabs = [getattr(A, op) for op in OPS]
    if with_guard and A.guard is not None:
        tabs.append(A.guard)
    changed = True
    while changed:
        changed = False
        blocks = theta.blocks()
        for tab in tabs:
            for blk in blocks:
                for a, b in zip(blk, blk[1:]):
                    for c in range(A.n):
                        changed |= theta.union(tab[a][c], tab[b][c])
                        changed |= theta.union(tab[c][a], tab[c][b])
    return theta


def cg_hamiltonian(A: FiniteAlgebra, b1: int, b2: int) -> set:
    """``{(a1, a2) | (b1≡b2)^n <= a1≡a2 for some n}``, powers taken to their fixpoint."""
    d = A.equiv(b1, b2)
    powers = [A.e]
    while True:
        nxt = A.prod[d][powers[-1]]
        if nxt in powers:
            break
        powers.append(nxt)
    out = set()
    for a1, a2 in product(range(A.n), range(A.n)):
        q = A.equiv(a1, a2)
        if any(A.leq(p, q) for p in powers):
            out.add((a1, a2))
    return out


def check_edpc_exponent(A: FiniteAlgebra, n: int) -> bool:
    """``(x∧e)^n ≈ (x∧e)^(n+1)``."""
    if n < 0:
        raise AlgebraError("exponent must be non-negative")
    return all(A.power(A.meet[a][A.e], n) == A.power(A.meet[a][A.e], n + 1) for a in range(A.n))


def check_cip_identity(A: FiniteAlgebra, b1: int, b2: int, c1: int, c2: int) -> bool:
    """``Cg(b1,b2) ∩ Cg(c1,c2) = Cg(e, (b1≡b2) ∨ (c1≡c2))``."""
    left = cg_bruteforce(A, b1, b2).pairs() & cg_bruteforce(A, c1, c2).pairs()
    right = cg_bruteforce(A, A.e, A.join[A.equiv(b1, b2)][A.equiv(c1, c2)]).pairs()
    return left == right


def noncommutative_chain_search(max_size: int = 4):
    """Smallest residuated chain (found by enumeration) that fails the
    Hamiltonian law at k = 1, with its failing pair."""
    for n in range(3, max_size + 1):
        for e in range(n):
            cells = [(a, b) for a in range(n) for b in range(n) if a != e and b != e]
            for values in product(range(n), repeat=len(cells)):
                prod = [[0] * n for _ in range(n)]
                for a in range(n):
                    prod[a][e] = a
                    prod[e][a] = a
                for (a, b), v in zip(cells, values):
                    prod[a][b] = v
                if all(prod[a][b] == prod[b][a] for a in range(n) for b in range(n)):
                    continue
                if not _monotone(prod, n):
                    continue
                alg = chain_from_product(prod, e, 0)
                if alg is None:
                    continue
                fail = is_hamiltonian(alg, 1)
                if fail is not True:
                    return alg, fail
    return None


def _monotone(prod, n) -> bool:
    for a in range(n):
        for b in range(n - 1):
            if prod[a][b] > prod[a][b + 1] or prod[b][a] > prod[b + 1][a]:
                return False
    return True
