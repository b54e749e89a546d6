import pytest

from resguard import oracle
from resguard.interpolation import (
    NoWitness, WitnessError, canonical_witness, left_interpolant, left_interpolant_report,
    right_interpolant, strip_guards,
)
from resguard.randgen import case_rng, random_nonleaf_term, random_term
from resguard.syntax import parse_term, print_term
from resguard.terms import E, LAMBDA, Signature, free_vars, guard, join_conclusion, meet

G = Signature.LA_GUARD


def p(src):
    return parse_term(src, G)


def test_right_examples():
    s_star = right_interpolant(p("x & y"), "y")
    assert s_star == p("x & e")
    for i in range(100):
        v = random_term(case_rng(0, "rv", i), G, ["x"], 3, max_guards=1)
        assert oracle.decide(G, None, [p("x & y")], v) == oracle.decide(G, None, [s_star], v)
    e_star = right_interpolant(E, "y", ["x"])
    for i in range(50):
        v = random_term(case_rng(1, "rv", i), G, ["x"], 3, max_guards=1)
        assert oracle.decide(G, None, [E], v) == oracle.decide(G, None, [e_star], v)


def test_left_examples():
    t = p("y | -y")
    wc = canonical_witness(t, "y")
    assert not isinstance(wc, NoWitness) and oracle.decide(G, None, [wc], t)
    t_star = left_interpolant(t, "y")
    for i in range(100):
        u = random_term(case_rng(2, "lu", i), G, ["x", "z"], 3, max_guards=1)
        assert oracle.decide(G, None, [u], t) == oracle.decide(G, None, [u], t_star)
    nw = left_interpolant(p("y"), "y")
    assert isinstance(nw, NoWitness) and not nw
    assert nw.failing == (E, LAMBDA)
    for i in range(100):
        u = random_term(case_rng(3, "lu", i), G, ["x", "z"], 3, max_guards=1)
        assert not oracle.decide(G, None, [u], p("y"))


def test_left_without_y():
    t = p("x | -x")
    t_star = left_interpolant(t, "y", ["x"])
    for i in range(50):
        u = random_term(case_rng(4, "lu", i), G, ["x"], 3, max_guards=1)
        assert oracle.decide(G, None, [u], t) == oracle.decide(G, None, [u], t_star)


def test_supplied_witness():
    t = p("y | -y")
    rep = left_interpolant_report(t, "y", witness=p("x"))
    assert rep.witness == p("x")
    assert print_term(rep.output) == "e |> e | x"
    with pytest.raises(WitnessError):
        left_interpolant(p("y"), "y", witness=p("x"))
    with pytest.raises(WitnessError):
        left_interpolant(t, "y", witness=p("y"))


def test_strip_guards():
    w = p("x & (y |> z)")
    assert strip_guards(w) == p("x & z & y")
    for i in range(100):
        w = random_term(case_rng(5, "strip", i), G, ["x", "y"], 3, guard_prob=0.4)
        # stripped term is >= e only where w is
        assert oracle.decide(G, None, [strip_guards(w)], w)


def test_random_contracts_and_freshness():
    for i in range(40):
        rng = case_rng(6, "ui", i)
        s = random_nonleaf_term(rng, G, ["x1", "x2", "y"], 4, max_guards=1)
        s_star = right_interpolant(s, "y", ["x1", "x2"])
        assert "y" not in free_vars(s_star)
        for _ in range(5):
            v = random_term(rng, G, ["x1", "x2"], 3, max_guards=1)
            assert oracle.decide(G, None, [s], v) == oracle.decide(G, None, [s_star], v)
        t_star = left_interpolant(s, "y", ["x1", "x2"])
        if isinstance(t_star, NoWitness):
            continue
        assert "y" not in free_vars(t_star)
        for _ in range(5):
            u = random_term(rng, G, ["x1", "x2", "z"], 3, max_guards=1)
            assert oracle.decide(G, None, [u], s) == oracle.decide(G, None, [u], t_star)


def test_deduction_coherence():
    rep = left_interpolant_report(p("y | -y | x"), "y")
    w = strip_guards(rep.witness)
    for i in range(30):
        u = random_term(case_rng(7, "coh", i), G, ["x"], 2)
        for s2, t2 in rep.elim_pairs:
            t3 = join_conclusion(t2, w)
            assert oracle.decide(G, None, [u], guard(s2, t3)) == oracle.decide(G, None, [meet(u, s2)], t3)
