from fractions import Fraction

import pytest

from conftest import rational_points
from resguard import oracle
from resguard.classic import ClassicError, chi_dlo, chi_oag, qe_doag
from resguard.qf import (
    Atom, Not, dlo_valid, eval_la, iff, implies, parse_formula, print_formula,
)
from resguard.randgen import case_rng


def f(src):
    return parse_formula(src)


def equivalent(a, b):
    return oracle.decide_oag_qf(iff(a, b))


def _line(atom, pt, y):
    """Value of right - left as c*y + d at the point."""
    d0 = oracle.evaluate(atom.right, dict(pt, **{y: 0}), "LA") - oracle.evaluate(atom.left, dict(pt, **{y: 0}), "LA")
    d1 = oracle.evaluate(atom.right, dict(pt, **{y: 1}), "LA") - oracle.evaluate(atom.left, dict(pt, **{y: 1}), "LA")
    return d1 - d0, d0


def _atoms(psi):
    if isinstance(psi, Atom):
        return [psi]
    if isinstance(psi, Not):
        return _atoms(psi.arg)
    return [a for x in psi.args for a in _atoms(x)]


def exists_y_bruteforce(psi, pt, y="y"):
    """Try y at every breakpoint, every midpoint, and beyond both ends."""
    roots = set()
    for a in _atoms(psi):
        c, d = _line(a, pt, y)
        if c:
            roots.add(-d / c)
    rs = sorted(roots) or [Fraction(0)]
    cands = set(rs) | {rs[0] - 1, rs[-1] + 1} | {(p + q) / 2 for p, q in zip(rs, rs[1:])}
    return any(eval_la(psi, dict(pt, **{y: v})) for v in cands)


def test_qe_example():
    psi = f("x1 < y && y < x2")
    assert equivalent(qe_doag(psi, "y"), f("x1 < x2"))


def test_chi_oag_example():
    psi = f("x1 < y && y < x2")
    chi = chi_oag(psi, "y")
    assert oracle.decide_oag_qf(implies(psi, chi))
    assert equivalent(chi, f("x1 < x2"))


def test_chi_dlo_degenerate():
    # only the trivial order satisfies this, so the answer is the literal 0 = 1
    assert print_formula(chi_dlo(parse_formula("y = 0 && y = 1", dlo=True), "y"), dlo=True) == "0 = 1"
    assert print_formula(chi_dlo(parse_formula("0 < y && y < 1", dlo=True), "y"), dlo=True) == "0 != 1"
    assert print_formula(chi_dlo(parse_formula("y < y", dlo=True), "y"), dlo=True) == "FALSE"


def test_chi_dlo_entailed():
    psi = parse_formula("x1 < y && y < x2", dlo=True)
    chi = chi_dlo(psi, "y")
    assert dlo_valid(implies(psi, chi))
    assert dlo_valid(implies(chi, parse_formula("x1 < x2", dlo=True)))


def test_y_free_and_tautologous():
    psi = f("x1 < x2 && x1 <= 0")
    assert equivalent(qe_doag(psi, "y"), psi)
    assert print_formula(qe_doag(f("y = y"), "y")) == "TRUE"
    assert print_formula(chi_oag(f("y = y"), "y")) == "TRUE"


def test_errors():
    with pytest.raises(ClassicError):
        chi_oag(f("x1 < y || y < x2"), "y")


def _random_literal(rng, names):
    coef = {n: rng.randint(-2, 2) for n in names}
    if not any(coef.values()):
        coef[names[0]] = 1
    body = " + ".join(f"{c}*{n}" for n, c in coef.items() if c)
    rel = rng.choice(["<", "<=", "="])
    return f"{body} {rel} 0"


def test_qe_against_bruteforce():
    for i in range(60):
        rng = case_rng(0, "qe", i)
        psi = f(" && ".join(_random_literal(rng, ["x1", "x2", "y"]) for _ in range(rng.randint(1, 3))))
        qe = qe_doag(psi, "y")
        assert "y" not in qe.variables()
        for pt in rational_points(["x1", "x2"], 25, seed=i):
            assert eval_la(qe, pt) == exists_y_bruteforce(psi, pt)
        chi = chi_oag(psi, "y", ["x1", "x2"])
        assert oracle.decide_oag_qf(implies(psi, chi))
