import pytest

from resguard import oracle
from resguard.guards import (
    GuardCalculusError, deduction_left, deduction_right, eliminate_guards, reverse_disjunct,
)
from resguard.randgen import case_rng, random_term
from resguard.syntax import parse_conclusion, parse_term, print_term
from resguard.terms import (
    E, LAMBDA, Bin, Signature, SignatureError, Var, VarContext, count_guards, free_vars, has_guard, join_conclusion, meet,
    nabla,
)

G = Signature.LA_GUARD
x, y = Var("x"), Var("y")


def show(pairs):
    return [(print_term(a), print_term(b)) for a, b in pairs]


def test_deduction_examples():
    g, t = deduction_right([x], y, x & y, G)
    assert g == [x] and t == Bin("guard", y, x & y)
    assert oracle.decide(G, None, [x, y], x & y) and oracle.decide(G, None, g, t)
    assert deduction_right([], x, y, G) == ([], Bin("guard", x, y))
    assert deduction_left([x], Bin("guard", y, x & y), G) == ([x], y, x & y)
    with pytest.raises(GuardCalculusError):
        deduction_right([], x, LAMBDA, G)
    with pytest.raises(SignatureError):
        deduction_right([], x, y, Signature.LA)


def test_reverse_examples():
    ctx = VarContext(("x",))
    s, t = x, parse_term("-x", "LA_GUARD")
    g, t2 = reverse_disjunct([], s, t, ctx, G)
    assert g == [nabla(x, ctx)] and t2 == t
    assert oracle.decide(G, ctx, [], x | t) and oracle.decide(G, ctx, g, t2)
    assert reverse_disjunct([x], LAMBDA, y, VarContext(("x", "y")), G) == ([x, E], y)


def test_elimination_examples():
    assert show(eliminate_guards(Bin("guard", x, y), LAMBDA)) == [("y & x", "LAMBDA"), ("e", "x")]
    assert show(eliminate_guards(E, Bin("guard", x, y))) == [("e & x", "y"), ("e", "e | x")]
    assert list(eliminate_guards(x & y, x)) == [(x & y, x)]


def test_elimination_conclusion_side_by_oracle():
    pairs = list(eliminate_guards(E, Bin("guard", x, y)))
    for i in range(100):
        rng = case_rng(0, "concl", i)
        u = random_term(rng, Signature.LA, ["x", "y"], 2)
        v = LAMBDA if i % 5 == 0 else random_term(rng, Signature.LA, ["x", "y"], 2)
        whole = oracle.decide(G, None, [meet(u, E)], join_conclusion(Bin("guard", x, y), v))
        parts = all(oracle.decide(G, None, [meet(u, a)], join_conclusion(b, v)) for a, b in pairs)
        assert whole == parts


@pytest.mark.parametrize("sig", [Signature.LA_GUARD, Signature.MV_GUARD])
def test_structure_and_ledger(sig):
    for i in range(60):
        rng = case_rng(1, sig.value, i)
        s = random_term(rng, sig, ["x", "y"], 3, guard_prob=0.4, max_guards=2)
        t = parse_conclusion("LAMBDA", sig) if i % 4 == 0 else random_term(rng, sig, ["x", "y"], 3, guard_prob=0.4, max_guards=2)
        pairs = list(eliminate_guards(s, t))
        n = count_guards(s) + count_guards(t)
        assert 1 <= len(pairs) <= 2 ** n
        fv = free_vars(s) | (set() if t is LAMBDA else free_vars(t))
        for a, b in pairs:
            assert not has_guard(a) and not has_guard(b)
            assert free_vars(a) <= fv and (b is LAMBDA or free_vars(b) <= fv)
        for _ in range(3):
            u = random_term(rng, sig.without_guard(), ["x", "y"], 2)
            v = random_term(rng, sig.without_guard(), ["x", "y"], 2)
            whole = oracle.decide(sig, None, [meet(u, s)], join_conclusion(t, v))
            assert whole == all(oracle.decide(sig, None, [meet(u, a)], join_conclusion(b, v)) for a, b in pairs)


def test_guards_inside_other_guards():
    s = parse_term("(x |> y) |> (y |> x)", "LA_GUARD")
    pairs = list(eliminate_guards(s, LAMBDA))
    assert len(pairs) <= 8 and not any(has_guard(a) or has_guard(b) for a, b in pairs)
