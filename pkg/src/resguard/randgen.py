"""Seeded random terms, forms and problems for the verification suites."""

from __future__ import annotations

import random
from typing import Sequence

from .normal_form import LinForm, form_to_term
from .terms import (
    E, ZERO, Bin, Signature, Term, Var,
)

CORE_BINARY = ("meet", "join", "prod", "lres", "rres")

# leaf constant : leaf variable : operator
WEIGHTS = (2, 3, 5)


def case_rng(seed, suite: str, index: int) -> random.Random:
    """Independent stream per case, so cases can run in any order."""
    return random.Random(f"{seed}:{suite}:{index}")


def random_term(rng: random.Random, sig: Signature, names: Sequence[str], depth: int,
                guard_prob: float = 0.15, max_guards: int | None = None) -> Term:
    budget = [max_guards if max_guards is not None else 10**9]

    def leaf():
        if not names or rng.random() < WEIGHTS[0] / (WEIGHTS[0] + WEIGHTS[1]):
            return rng.choice((E, ZERO))
        return Var(rng.choice(names))

    def go(d):
        if d == 0:
            return leaf()
        r = rng.random() * sum(WEIGHTS)
        if r < WEIGHTS[0]:
            return rng.choice((E, ZERO)) if names else leaf()
        if r < WEIGHTS[0] + WEIGHTS[1]:
            return leaf() if not names else Var(rng.choice(names))
        if sig.guarded and budget[0] > 0 and rng.random() < guard_prob:
            budget[0] -= 1
            return Bin("guard", go(d - 1), go(d - 1))
        return Bin(rng.choice(CORE_BINARY), go(d - 1), go(d - 1))

    return go(depth)


def random_nonleaf_term(rng, sig, names, depth, **kw) -> Term:
    """Like :func:`random_term` but retries a few times to avoid bare leaves."""
    t = random_term(rng, sig, names, depth, **kw)
    for _ in range(4):
        if isinstance(t, Bin):
            break
        t = random_term(rng, sig, names, depth, **kw)
    return t


def random_form(rng, names: Sequence[str], coef: int = 3, density: float = 0.6) -> LinForm:
    d = {}
    for n in names:
        if rng.random() < density:
            d[n] = rng.randint(-coef, coef)
    return LinForm.from_dict(d)


def random_lattice_of_forms(rng, names, max_factors: int = 3, coef: int = 3, y: str | None = None) -> Term:
    """A meet/join combination of up to ``max_factors`` linear forms, biased to mention ``y``."""
    n = rng.randint(1, max_factors)
    forms = []
    for _ in range(n):
        f = random_form(rng, names, coef)
        if y is not None and rng.random() < 0.7 and f.coeff(y) == 0:
            f = f + LinForm.var(y, rng.choice([c for c in range(-coef, coef + 1) if c]))
        forms.append(form_to_term(f))

    def build(items):
        if len(items) == 1:
            return items[0]
        cut = rng.randint(1, len(items) - 1)
        op = rng.choice(("meet", "join"))
        return Bin(op, build(items[:cut]), build(items[cut:]))

    return build(forms)
