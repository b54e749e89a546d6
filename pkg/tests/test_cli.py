import json

from resguard.cli import INPUT_ERROR, OK, VIOLATION, main
from resguard.finalg import lukasiewicz


def run(capsys, *argv):
    code = main(["--json", *argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


def test_check(tmp_path, capsys):
    p = write(tmp_path, "p.json", {"signature": "LA", "premises": ["x & y"], "conclusion": "x"})
    code, out = run(capsys, "check", p)
    assert code == OK and out == {"verdict": True}
    p = write(tmp_path, "q.json", {"signature": "LA", "premises": ["x"], "conclusion": "x - y"})
    code, out = run(capsys, "check", p)
    assert code == OK and out["verdict"] is False and set(out["counterexample"]) == {"x", "y"}
    p = write(tmp_path, "m.json", {"signature": "MV_GUARD", "premises": ["x"], "conclusion": "D x"})
    assert run(capsys, "check", p, "--method", "pieces") == (OK, {"verdict": True})


def test_input_errors(tmp_path, capsys):
    p = write(tmp_path, "bad.json", {"signature": "LA", "premises": ["x &"], "conclusion": "x"})
    code, out = run(capsys, "check", p)
    assert code == INPUT_ERROR and out["code"] == "parse" and (out["line"], out["col"]) == (1, 4)
    p = write(tmp_path, "bad2.json", "{")
    assert run(capsys, "check", p)[0] == INPUT_ERROR
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == INPUT_ERROR
    assert run(capsys, "eliminate-var", "--y", "y", "--s", "x |> y", "--t", "y")[0] == INPUT_ERROR
    assert main(["no-such-command"]) == INPUT_ERROR
    capsys.readouterr()


def test_text_errors_go_to_stderr(capsys):
    assert main(["eliminate-guard", "--s", "x |>", "--t", "y"]) == INPUT_ERROR
    captured = capsys.readouterr()
    assert captured.out == "" and "error" in captured.err


def test_eliminate_guard(capsys):
    code, out = run(capsys, "eliminate-guard", "--s", "x |> y", "--t", "LAMBDA")
    assert code == OK and out["pairs"] == [["y & x", "LAMBDA"], ["e", "x"]]


def test_eliminate_var(capsys):
    code, out = run(capsys, "eliminate-var", "--y", "y", "--s", "(x1 + y) & (x2 - 2*y)", "--t", "LAMBDA")
    assert code == OK and out["k"] == 2 and len(out["pairs"]) == 1


def test_uinterp(capsys):
    code, out = run(capsys, "uinterp", "right", "--var", "y", "--term", "x & y")
    assert code == OK and out["output"] == "x & e"
    code, out = run(capsys, "uinterp", "left", "--var", "y", "--term", "y | -y")
    assert code == OK and out["output"] is not None
    assert run(capsys, "uinterp", "left", "--var", "y", "--term", "y", "--witness", "x")[0] == INPUT_ERROR
    assert run(capsys, "uinterp", "right", "--var", "y", "--term", "y", "--witness", "x")[0] == INPUT_ERROR


def test_classic_commands(capsys):
    code, out = run(capsys, "qe-doag", "--psi", "x1 < y && y < x2", "--exvar", "y")
    assert code == OK and out["result"] == "x1 < x2"
    assert run(capsys, "chi-oag", "--psi", "x1 < y && y < x2")[0] == OK
    code, out = run(capsys, "chi-dlo", "--psi", "y = 0 && y = 1")
    assert code == OK and out["chi"] == "0 = 1"


def test_finalg(tmp_path, capsys):
    good = write(tmp_path, "l3.json", lukasiewicz(3).to_json())
    code, out = run(capsys, "finalg", good, "--all", "--commutative", "--mv")
    assert code == OK and out["edpc_exponent"] == 2 and out["cg_mismatches"] == [] and out["cip_failures"] == []
    data = lukasiewicz(3).to_json()
    data["lres"][0][0] = 0
    bad = write(tmp_path, "bad.json", data)
    assert run(capsys, "finalg", bad)[0] == VIOLATION
    data["meet"] = [[0]]
    assert run(capsys, "finalg", write(tmp_path, "worse.json", data))[0] == INPUT_ERROR


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--suite", "reverse", "--seed", "4", "--cases", "10"]
    a = run(capsys, *argv)
    b = run(capsys, *argv)
    assert a == b and a[0] == OK
    code, out = run(capsys, *argv, "--timing")
    assert code == OK


def test_verify_reports_violation(capsys, monkeypatch):
    from resguard import harness
    from resguard.terms import E

    monkeypatch.setattr(harness, "eliminate_guards", lambda s, t: [(E, E)])
    code, _ = run(capsys, "verify", "--suite", "guard-elim", "--cases", "20")
    assert code == VIOLATION
