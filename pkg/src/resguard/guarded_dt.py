"""Guarded deduction theorem instances over lattice-ordered abelian groups.

Conditions, for conjunctions of equations ``π(w̄)``, terms ``s1, s2, t1, t2``
over ``w̄`` and a fresh ``z``:

(i)  ``(π & t1≈t2) → s1≈s2``  is valid  iff  ``π → ∀z.(γ → φ)``  is valid;
(ii) ``(π & γ) → σ``  is valid  iff  ``π → σ``  is valid, for every equation ``σ(w̄)``.

Equations enter the consequence relation through ``a≈b  ↦  e ≤ a≡b`` and
inequalities through ``a≤b  ↦  e ≤ a\\b``.  Both sides of each condition are
decided by the oracle over ℝ, which settles quasi-equations for the whole
variety.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import oracle
from .normal_form import normalize
from .randgen import case_rng, random_term
from .syntax import parse_term, print_term
from .terms import (
    Signature, Term, Var, equiv, from_la_sugar, lres, substitute,
)

SIG = Signature.LA
FRESH = "z"

# atoms are (rel, left, right) with rel in {"eq", "le"}, over x1, x2, y1, y2, z
PRESETS = {
    "lemma": ("(x1 \\ x2) & (x2 \\ x1) & e <= z", "((y1 \\ y2) & (y2 \\ y1) & e) | z = e", "z = e"),
    "la-example": ("(x1 - x2) & (x2 - x1) & 0 <= z", "((y1 - y2) & (y2 - y1) & 0) | z = 0", "z = 0"),
}


class GuardedDTError(ValueError):
    pass


def _atom(src: str):
    for rel, sym in (("le", "<="), ("eq", "=")):
        if sym in src:
            a, b = src.split(sym)
            return rel, from_la_sugar(parse_term(a, "LA")), from_la_sugar(parse_term(b, "LA"))
    raise GuardedDTError(f"not an atom: {src}")


def preset(name: str):
    """``(γ atoms, φ atoms)`` for a named preset."""
    try:
        g1, g2, phi = PRESETS[name]
    except KeyError:
        raise GuardedDTError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return [_atom(g1), _atom(g2)], [_atom(phi)]


def same_up_to_normal_form(a, b) -> bool:
    """Atom lists agree relation-wise with normal-form-equal sides."""
    if len(a) != len(b):
        return False
    for (r1, l1, m1), (r2, l2, m2) in zip(a, b):
        if r1 != r2:
            return False
        if normalize(l1, "LA") != normalize(l2, "LA") or normalize(m1, "LA") != normalize(m2, "LA"):
            return False
    return True


def encode(atom) -> Term:
    rel, a, b = atom
    return equiv(a, b) if rel == "eq" else lres(a, b)


def _instantiate(atoms, s1, s2, t1, t2, z: Term):
    m = {"x1": s1, "x2": s2, "y1": t1, "y2": t2, FRESH: z}
    return [(rel, substitute(a, m), substitute(b, m)) for rel, a, b in atoms]


def _valid(premises, conclusion_atom) -> bool:
    return oracle.decide(SIG, None, [encode(p) for p in premises], encode(conclusion_atom))


def _valid_all(premises, conclusions) -> bool:
    return all(_valid(premises, c) for c in conclusions)


@dataclass
class Instance:
    pi: list  # atoms over w̄
    s1: Term
    s2: Term
    t1: Term
    t2: Term
    sigma: tuple

    def to_json(self):
        show = lambda a: [a[0], print_term(a[1]), print_term(a[2])]
        return {
            "pi": [show(a) for a in self.pi],
            "s": [print_term(self.s1), print_term(self.s2)],
            "t": [print_term(self.t1), print_term(self.t2)],
            "sigma": show(self.sigma),
        }


def condition_i(inst: Instance, gamma, phi) -> tuple[bool, bool]:
    """Truth values of the two sides of (i)."""
    left = _valid(inst.pi + [("eq", inst.t1, inst.t2)], ("eq", inst.s1, inst.s2))
    z = Var(FRESH)
    g = _instantiate(gamma, inst.s1, inst.s2, inst.t1, inst.t2, z)
    f = _instantiate(phi, inst.s1, inst.s2, inst.t1, inst.t2, z)
    right = _valid_all(inst.pi + g, f)
    return left, right


def condition_ii(inst: Instance, gamma) -> tuple[bool, bool]:
    z = Var(FRESH)
    g = _instantiate(gamma, inst.s1, inst.s2, inst.t1, inst.t2, z)
    return _valid(inst.pi + g, inst.sigma), _valid(inst.pi, inst.sigma)


def random_instance(rng, names=("w1", "w2"), depth: int = 3) -> Instance:
    def term():
        return random_term(rng, SIG, names, rng.randint(1, depth))

    pi = [("eq", term(), term()) for _ in range(rng.randint(0, 2))]
    t1, t2 = term(), term()
    mode = rng.random()
    if mode < 0.4:
        # s_i = C[t_i]: the left side of (i) holds
        ctx = random_term(rng, SIG, list(names) + ["_h"], 2)
        s1, s2 = substitute(ctx, {"_h": t1}), substitute(ctx, {"_h": t2})
    elif mode < 0.55:
        s1 = term()
        s2 = s1
    else:
        s1, s2 = term(), term()
    if rng.random() < 0.3:
        sigma = ("eq", s1, s2)
    else:
        sigma = ("eq", term(), term())
    return Instance(pi, s1, s2, t1, t2, sigma)


@dataclass
class DTReport:
    preset: str
    cases: int
    disagreements: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def guarded_dt_suite(name: str = "la-example", sig=SIG, cases: int = 300, seed=0) -> DTReport:
    if isinstance(sig, str):
        sig = Signature.parse(sig)
    if sig.family != "LA":
        raise GuardedDTError("guarded deduction instances are decided over lattice-ordered abelian groups only")
    gamma, phi = preset(name)
    rep = DTReport(name, cases, counts={"i_true": 0, "ii_true": 0})
    for i in range(cases):
        inst = random_instance(case_rng(seed, "guarded-dt", i))
        li, ri = condition_i(inst, gamma, phi)
        lii, rii = condition_ii(inst, gamma)
        rep.counts["i_true"] += li
        rep.counts["ii_true"] += rii
        if li != ri:
            rep.disagreements.append({"case": i, "condition": "i", "left": li, "right": ri, **inst.to_json()})
        if lii != rii:
            rep.disagreements.append({"case": i, "condition": "ii", "left": lii, "right": rii, **inst.to_json()})
    return rep
