import pytest

from conftest import rational_points
from resguard import oracle
from resguard.elimination import EliminationError, eliminate, eliminate_basic, witness_y
from resguard.normal_form import LinForm, la_conormalize, la_normalize, normalize, uniformize_y
from resguard.randgen import case_rng, random_lattice_of_forms
from resguard.syntax import parse_conclusion, parse_term
from resguard.terms import LAMBDA, Signature, free_vars, join_conclusion, meet

LA = Signature.LA


def p(src):
    return parse_conclusion(src, "LA")


def nf_equal(a, b):
    if a is LAMBDA or b is LAMBDA:
        return a is b
    return normalize(a, "LA") == normalize(b, "LA")


def ledger(s, t, pairs, names, rng, n=20):
    for _ in range(n):
        u = random_lattice_of_forms(rng, names, 2, 3)
        v = LAMBDA if rng.random() < 0.2 else random_lattice_of_forms(rng, names, 2, 3)
        whole = oracle.decide(LA, None, [meet(u, s)], join_conclusion(t, v))
        parts = all(oracle.decide(LA, None, [meet(u, a)], join_conclusion(b, v)) for a, b in pairs)
        if whole != parts:
            return False
    return True


def test_golden_case():
    s, t = p("(s1 + y) & (s2 - y)"), p("(t1 + y) | (t2 - y)")
    res = eliminate(s, t, "y")
    assert res.k_scale == 1 and len(res) == 1
    (a, b), = res.pairs
    assert nf_equal(a, p("s1 + s2"))
    assert nf_equal(b, p("(t1 + t2) | (t1 - s1) | (t2 - s2)"))


def test_concrete_golden_case():
    s, t = p("(x1 + y) & (x2 - y)"), p("(x3 + y) | (x4 - y)")
    res = eliminate(s, t, "y")
    (a, b), = res.pairs
    assert nf_equal(a, p("x1 + x2"))
    assert nf_equal(b, p("(x3 + x4) | (x3 - x1) | (x4 - x2)"))
    assert ledger(s, t, res.pairs, ["x1", "x2", "x3", "x4", "z1"], case_rng(0, "gold", 0), 100)


def test_witness_assignment_falsifies():
    # when the reduced pair fails at a point, y from the min/max formula refutes the original
    s, t = p("(x1 + y) & (x2 - y)"), p("(x3 + y) | (x4 - y)")
    m = la_normalize(s).disjuncts[0]
    j = la_conormalize(t).conjuncts[0]
    u = uniformize_y(m, j, "y")
    a, b = eliminate_basic(u).terms()
    found = 0
    for pt in rational_points(["x1", "x2", "x3", "x4"], 300):
        if oracle.evaluate(a, pt, "LA") >= 0 and oracle.evaluate(b, pt, "LA") < 0:
            found += 1
            full = dict(pt, y=witness_y(u, pt))
            assert oracle.evaluate(s, full, "LA") >= 0 and oracle.evaluate(t, full, "LA") < 0
    assert found


def test_examples():
    (a, b), = eliminate(p("x & y"), LAMBDA, "y").pairs
    assert nf_equal(a, p("x")) and b is LAMBDA
    (a, b), = eliminate(p("e"), p("y"), "y").pairs
    assert nf_equal(a, p("e")) and b is LAMBDA
    pairs = eliminate(p("(x1 + y) | (x2 - y)"), LAMBDA, "y").pairs
    assert len(pairs) == 2 and all(nf_equal(a, p("e")) and b is LAMBDA for a, b in pairs)
    res = eliminate(p("(x1 + y) & (x2 - 2*y)"), LAMBDA, "y")
    assert res.k_scale == 2
    (a, b), = res.pairs
    assert nf_equal(a, p("2*x1 + x2"))


def test_stability():
    s, t = p("x1 & (x2 + x1)"), p("x2 | -x1")
    (a, b), = eliminate(s, t, "y").pairs
    assert nf_equal(a, s) and nf_equal(b, t)


def test_errors():
    with pytest.raises(EliminationError):
        eliminate(parse_term("x |> y", "LA_GUARD"), LAMBDA, "y")


def test_random_ledger():
    names = ["x1", "x2", "y"]
    for i in range(40):
        rng = case_rng(1, "ve", i)
        s = random_lattice_of_forms(rng, names, 3, 3, y="y")
        t = LAMBDA if i % 6 == 0 else random_lattice_of_forms(rng, names, 3, 3, y="y")
        res = eliminate(s, t, "y")
        for a, b in res.pairs:
            assert "y" not in free_vars(a) and (b is LAMBDA or "y" not in free_vars(b))
        assert ledger(s, t, res.pairs, ["x1", "x2", "z1", "z2"], rng, 5)


def test_basic_case_table():
    F = LinForm.from_dict
    # only s1 + ky and t1 + ky: t' gets t1 - s1 and s' = s0
    u = uniformize_y((F({"x": 1, "y": 1}), F({"z": 1})), (F({"w": 1, "y": 1}),), "y")
    a, b = eliminate_basic(u).terms()
    assert nf_equal(a, p("z"))
    assert nf_equal(b, p("w - x"))
