import json

import pytest

from resguard.randgen import case_rng, random_term
from resguard.syntax import (
    ParseError, ProblemError, load_problem, parse_conclusion, parse_term, print_term, problem_from_dict,
)
from resguard.terms import (
    E, LAMBDA, ZERO, Bin, Scale, Signature, SignatureError, Un, Var, from_la_sugar, from_mv_sugar,
)

x, y, z = Var("x"), Var("y"), Var("z")


def _sugared(rng, sig, names, depth):
    """Random term that also uses the signature's sugar."""
    if depth == 0 or rng.random() < 0.25:
        return random_term(rng, sig, names, 0)
    a, b = _sugared(rng, sig, names, depth - 1), _sugared(rng, sig, names, depth - 1)
    r = rng.random()
    if sig.family == "LA" and r < 0.3:
        return rng.choice([Bin("plus", a, b), Bin("minus", a, b), Un("neg", a), Scale(rng.randint(1, 4), a)])
    if sig.family == "MV" and r < 0.3:
        ops = [Bin("oplus", a, b), Un("not", a)] + ([Un("delta", a)] if sig.guarded else [])
        return rng.choice(ops)
    op = rng.choice(["meet", "join", "prod", "lres", "rres"] + (["guard"] if sig.guarded else []))
    return Bin(op, a, b)


@pytest.mark.parametrize("sig", list(Signature))
def test_round_trip_random_terms(sig):
    for i in range(1000):
        rng = case_rng(11, sig.value, i)
        t = _sugared(rng, sig, ["x", "y", "z1"], rng.randint(0, 5))
        text = print_term(t)
        assert parse_term(text, sig) == t, text


def test_precedence():
    assert parse_term("x & y |> z") == Bin("guard", x & y, z)
    assert parse_term("(x & y) & z") == (x & y) & z
    assert parse_term(print_term(parse_term("(x & y) & z"))) == (x & y) & z
    t = Bin("guard", x, y | z)
    assert print_term(t) in ("x |> (y | z)", "x |> y | z")
    assert parse_term(print_term(t)) == t


def test_la_sugar_parse():
    t = parse_term("x1 + 2*x2 - x3", "LA")
    x1, x2, x3 = Var("x1"), Var("x2"), Var("x3")
    assert from_la_sugar(t) == Bin("prod", x1, Bin("prod", Bin("prod", x2, x2), Bin("lres", x3, E)))


def test_mv_sugar_parse():
    t = parse_term("~x ++ y", "MV")
    assert t == Bin("oplus", Un("not", x), y)
    assert from_mv_sugar(t) == Bin("lres", Bin("lres", Bin("lres", x, ZERO), ZERO), y)


def test_nabla_body_is_guard_free_text():
    from resguard.terms import nabla
    body = nabla(Var("x1"), ["x1"]).right
    assert "|>" not in print_term(body)


def test_sugar_is_signature_checked():
    with pytest.raises(ParseError):
        parse_term("x + y", "PRL")
    with pytest.raises(ParseError):
        parse_term("x |> y", "LA")
    with pytest.raises(ParseError):
        parse_term("~x", "LA")


def test_parse_error_positions():
    with pytest.raises(ParseError) as err:
        parse_term("x &\n  (y | ", "PRL")
    assert err.value.line == 2
    assert err.value.col >= 7
    assert err.value.expected
    with pytest.raises(ParseError) as err:
        parse_term("x @ y")
    assert (err.value.line, err.value.col) == (1, 3)


def test_conclusion():
    assert parse_conclusion("LAMBDA", "LA") is LAMBDA
    assert parse_conclusion("x", "LA") == x
    assert print_term(LAMBDA) == "LAMBDA"


def test_determinism():
    src = "x \\ y & (z / x) | e |> 0 * x"
    assert parse_term(src) == parse_term(src)
    assert print_term(parse_term(src)) == print_term(parse_term(src))


def test_problem_examples(tmp_path):
    p = problem_from_dict({"signature": "LA", "vars": {"xs": ["x"]}, "premises": ["x"], "conclusion": "x + x"})
    assert p.premises == [x]
    assert p.conclusion == Bin("plus", x, x)
    p = problem_from_dict({"signature": "MV", "vars": {"xs": []}, "premises": [], "conclusion": "LAMBDA"})
    assert p.premises == [] and p.conclusion is LAMBDA
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"signature": "PRL_GUARD", "vars": {"xs": ["x"], "y": "y"},
                             "premises": ["x |> y"], "conclusion": "e"}))
    assert load_problem(f).ctx.eliminable == "y"


@pytest.mark.parametrize("data,code", [
    ({"signature": "LA", "premises": []}, "schema"),
    ({"signature": "XX", "premises": [], "conclusion": "e"}, "schema"),
    ({"signature": "LA", "premises": "x", "conclusion": "e"}, "schema"),
    ({"signature": "LA", "vars": {"xs": ["x"]}, "premises": ["x &"], "conclusion": "e"}, "parse"),
    ({"signature": "LA", "vars": {"xs": ["x"]}, "premises": ["y"], "conclusion": "e"}, "undeclared"),
])
def test_problem_errors(data, code):
    with pytest.raises(ProblemError) as err:
        problem_from_dict(data)
    assert err.value.code == code


def test_missing_vars_block_is_inferred():
    p = problem_from_dict({"signature": "LA", "premises": ["x & y"], "conclusion": "x"})
    assert set(p.ctx.xs) == {"x", "y"}


def test_guard_rejected_outside_guarded_signature():
    with pytest.raises((ParseError, SignatureError)):
        parse_term("x |> y", "MV")
