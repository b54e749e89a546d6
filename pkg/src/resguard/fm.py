"""Exact Fourier–Motzkin feasibility for strict and non-strict linear inequalities.

A constraint reads ``sum(a_i * x_i) >= b`` (or ``>`` when strict).  Left-hand
sides are kept as primitive integer vectors so that elimination never leaves
the integers; only bounds and witnesses are rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Mapping, Sequence


def _as_fraction(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class LinearConstraint:
    lhs: tuple  # sorted ((name, int coefficient), ...), primitive
    bound: Fraction
    strict: bool = False

    @staticmethod
    def make(lhs: Mapping[str, object], bound=0, strict: bool = False) -> "LinearConstraint":
        """Normalize rational coefficients to a primitive integer row."""
        items = [(k, _as_fraction(v)) for k, v in lhs.items() if v != 0]
        b = _as_fraction(bound)
        den = 1
        for _, v in items:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [(k, int(v * den)) for k, v in items]
        b = b * den
        g = 0
        for _, v in ints:
            g = gcd(g, abs(v))
        if g > 1:
            ints = [(k, v // g) for k, v in ints]
            b = b / g
        return LinearConstraint(tuple(sorted(ints)), b, strict)

    @property
    def variables(self) -> set:
        return {k for k, _ in self.lhs}

    def coeff(self, name: str) -> int:
        for k, v in self.lhs:
            if k == name:
                return v
        return 0

    def value(self, point: Mapping[str, object]) -> Fraction:
        return sum((_as_fraction(point.get(k, 0)) * v for k, v in self.lhs), Fraction(0))

    def holds(self, point: Mapping[str, object]) -> bool:
        v = self.value(point)
        return v > self.bound if self.strict else v >= self.bound

    def trivial_ok(self) -> bool:
        """Truth value of a constraint with empty left-hand side."""
        return 0 > self.bound if self.strict else 0 >= self.bound

    def __str__(self):
        lhs = " + ".join(f"{v}*{k}" for k, v in self.lhs) or "0"
        return f"{lhs} {'>' if self.strict else '>='} {self.bound}"


@dataclass(frozen=True)
class ConstraintSystem:
    constraints: tuple
    box: tuple = ()  # variables additionally confined to [0, 1]

    def with_box_constraints(self) -> tuple:
        extra = []
        for v in self.box:
            extra.append(LinearConstraint(((v, 1),), Fraction(0), False))
            extra.append(LinearConstraint(((v, -1),), Fraction(-1), False))
        return tuple(self.constraints) + tuple(extra)

    @property
    def variables(self) -> list:
        names = set(self.box)
        for c in self.constraints:
            names |= c.variables
        return sorted(names)

    def holds(self, point) -> bool:
        return all(c.holds(point) for c in self.with_box_constraints())


@dataclass
class FMResult:
    feasible: bool
    witness: dict | None = None

    def __bool__(self):
        return self.feasible


def _dedupe(cons: Iterable[LinearConstraint]):
    """Keep the tightest bound per left-hand side; None signals a contradiction."""
    best: dict = {}
    for c in cons:
        if not c.lhs:
            if not c.trivial_ok():
                return None
            continue
        cur = best.get(c.lhs)
        if cur is None or c.bound > cur.bound or (c.bound == cur.bound and c.strict and not cur.strict):
            best[c.lhs] = c
    # opposite rows a >= b and -a >= b' force b <= a <= -b'
    for lhs, c in best.items():
        neg = tuple((k, -v) for k, v in lhs)
        d = best.get(neg)
        if d is not None:
            hi = -d.bound
            if c.bound > hi or (c.bound == hi and (c.strict or d.strict)):
                return None
    return list(best.values())


def _combine(p: LinearConstraint, n: LinearConstraint, var: str) -> LinearConstraint:
    a, b = p.coeff(var), -n.coeff(var)  # both positive
    d: dict = {}
    for k, v in p.lhs:
        d[k] = d.get(k, 0) + v * b
    for k, v in n.lhs:
        d[k] = d.get(k, 0) + v * a
    d.pop(var, None)
    return LinearConstraint.make(d, p.bound * b + n.bound * a, p.strict or n.strict)


def fm_feasible(system: ConstraintSystem | Sequence[LinearConstraint]) -> FMResult:
    if not isinstance(system, ConstraintSystem):
        system = ConstraintSystem(tuple(system))
    all_vars = system.variables
    cons = _dedupe(system.with_box_constraints())
    if cons is None:
        return FMResult(False)
    trail = []  # (var, lower rows, upper rows)
    remaining = {v for c in cons for v in c.variables}
    while remaining:
        best = None
        for v in sorted(remaining):
            pos = sum(1 for c in cons if c.coeff(v) > 0)
            neg = sum(1 for c in cons if c.coeff(v) < 0)
            score = pos * neg - pos - neg
            if best is None or score < best[0]:
                best = (score, v)
        var = best[1]
        pos = [c for c in cons if c.coeff(var) > 0]
        neg = [c for c in cons if c.coeff(var) < 0]
        rest = [c for c in cons if c.coeff(var) == 0]
        trail.append((var, pos, neg))
        new = rest + [_combine(p, n, var) for p in pos for n in neg]
        cons = _dedupe(new)
        if cons is None:
            return FMResult(False)
        remaining = {v for c in cons for v in c.variables}
    point: dict = {}
    for var, pos, neg in reversed(trail):
        point[var] = _pick(var, pos, neg, point)
    for v in all_vars:
        point.setdefault(v, Fraction(0))
    return FMResult(True, point)


def _pick(var, pos, neg, point) -> Fraction:
    lo = lo_strict = hi = hi_strict = None
    for c in pos:
        a = c.coeff(var)
        rest = sum((_as_fraction(point.get(k, 0)) * v for k, v in c.lhs if k != var), Fraction(0))
        val = (c.bound - rest) / a
        if lo is None or val > lo or (val == lo and c.strict):
            lo, lo_strict = val, c.strict
    for c in neg:
        a = -c.coeff(var)
        rest = sum((_as_fraction(point.get(k, 0)) * v for k, v in c.lhs if k != var), Fraction(0))
        val = (rest - c.bound) / a
        if hi is None or val < hi or (val == hi and c.strict):
            hi, hi_strict = val, c.strict
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return lo + 1 if lo_strict else lo
    if lo is None:
        return hi - 1 if hi_strict else hi
    if lo == hi:
        return lo
    return (lo + hi) / 2


# --- independent brute-force oracle -------------------------------------------

def _det(m: list[list[int]]) -> int:
    """Integer determinant by Bareiss elimination."""
    n = len(m)
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def brute_force_feasible(system: ConstraintSystem | Sequence[LinearConstraint], box: int = 10**6) -> bool:
    """Vertex enumeration inside ``[-box, box]^n``.

    The closure of the feasible set intersected with the box is a polytope; the
    mean of its vertices lies in its relative interior, which lies inside the
    (convex) feasible set whenever that set is non-empty.  So it suffices to
    test that single point against the strict rows.
    """
    if not isinstance(system, ConstraintSystem):
        system = ConstraintSystem(tuple(system))
    rows = list(system.with_box_constraints())
    names = system.variables
    n = len(names)
    for c in rows:
        if not c.lhs and not c.trivial_ok():
            return False
    if n == 0:
        return True
    idx = {v: i for i, v in enumerate(names)}

    def dense(c):
        vec = [0] * n
        for k, v in c.lhs:
            vec[idx[k]] = v
        return vec

    # integer hyperplanes a.x = b with b scaled to an integer
    planes = []
    for c in rows:
        if not c.lhs:
            continue
        b = c.bound
        planes.append(([v * b.denominator for v in dense(c)], b.numerator))
    for i in range(n):
        e = [0] * n
        e[i] = 1
        planes.append((e, box))
        planes.append((e, -box))
    planes = list(dict.fromkeys((tuple(a), b) for a, b in planes))

    closed = [(dense(c), c.bound) for c in rows if c.lhs]
    vertices = []
    for combo in combinations(planes, n):
        mat = [list(a) for a, _ in combo]
        d = _det(mat)
        if d == 0:
            continue
        pt = []
        for j in range(n):
            mj = [row[:] for row in mat]
            for r in range(n):
                mj[r][j] = combo[r][1]
            pt.append(Fraction(_det(mj), d))
        if any(abs(x) > box for x in pt):
            continue
        if all(sum(a * x for a, x in zip(vec, pt)) >= b for vec, b in closed):
            vertices.append(pt)
    if not vertices:
        return False
    centre = [sum(v[j] for v in vertices) / len(vertices) for j in range(n)]
    point = dict(zip(names, centre))
    return all(c.holds(point) for c in rows)
