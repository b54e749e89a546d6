from fractions import Fraction

from hypothesis import given, settings, strategies as st

from resguard.fm import ConstraintSystem, LinearConstraint, brute_force_feasible, fm_feasible

C = LinearConstraint.make


def test_examples():
    assert not fm_feasible([C({"x": 1}, 0), C({"x": -1}, 0, True)])
    r = fm_feasible([C({"x": 1}, 0, True), C({"y": 1, "x": -1}, 0)])
    assert r.feasible
    assert r.witness["x"] > 0 and r.witness["y"] >= r.witness["x"]


def test_make_normalizes():
    c = C({"x": Fraction(1, 2), "y": 1}, 3)
    assert c.lhs == (("x", 1), ("y", 2)) and c.bound == 6
    assert C({"x": 4, "y": 2}, 2).lhs == (("x", 2), ("y", 1))


def test_strictness_matters():
    # x >= 0, -x >= 0 is the point 0; making one strict empties it
    assert fm_feasible([C({"x": 1}, 0), C({"x": -1}, 0)]).feasible
    assert not fm_feasible([C({"x": 1}, 0, True), C({"x": -1}, 0)]).feasible
    # 0 < x < 1 is open but non-empty
    assert fm_feasible([C({"x": 1}, 0, True), C({"x": -1}, -1, True)]).feasible


def test_box():
    s = ConstraintSystem((C({"x": 1}, 2),), box=("x",))
    assert not fm_feasible(s)
    assert not brute_force_feasible(s)


def test_empty_and_constant_rows():
    assert fm_feasible([]).feasible
    assert not fm_feasible([C({}, 1)]).feasible
    assert fm_feasible([C({}, 0)]).feasible


rows = st.builds(
    lambda coeffs, b, strict: C(dict(zip(("a", "b", "c"), coeffs)), b, strict),
    st.lists(st.integers(-5, 5), min_size=1, max_size=3),
    st.integers(-5, 5),
    st.booleans(),
)


@settings(max_examples=300, deadline=None)
@given(st.lists(rows, min_size=1, max_size=6))
def test_agrees_with_vertex_enumeration(cons):
    s = ConstraintSystem(tuple(cons))
    r = fm_feasible(s)
    assert r.feasible == brute_force_feasible(s)
    if r.feasible:
        assert s.holds(r.witness)
