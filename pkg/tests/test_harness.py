import json

import pytest

from resguard import harness
from resguard.harness import SUITES, SuiteConfig, replay, run_suite
from resguard.terms import E


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_runs_clean(suite):
    rep = run_suite(SuiteConfig(suite, seed=5, cases=6, probes=3))
    assert rep.failed == 0, rep.counterexample
    assert rep.passed + rep.skipped == 6


def test_deterministic_reports():
    cfg = SuiteConfig("guard-elim", seed=11, cases=15, probes=3)
    a = json.dumps(run_suite(cfg).to_json(), sort_keys=True)
    b = json.dumps(run_suite(cfg).to_json(), sort_keys=True)
    assert a == b
    assert "seconds" not in json.loads(a)


def test_workers_do_not_change_results():
    cfg = SuiteConfig("deduction", seed=2, cases=20)
    one = run_suite(cfg).to_json()
    cfg.workers = 2
    assert run_suite(cfg).to_json() == one


def test_broken_construction_is_caught_and_replayed(monkeypatch):
    # a single trivially valid pair claims every problem holds
    monkeypatch.setattr(harness, "eliminate_guards", lambda s, t: [(E, E)])
    rep = run_suite(SuiteConfig("guard-elim", seed=0, cases=30, probes=4))
    assert rep.failed > 0 and not rep.ok
    cex = rep.counterexample
    ok, _ = replay("guard-elim", cex)
    assert not ok
    monkeypatch.undo()
    ok, _ = replay("guard-elim", cex)
    assert ok


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite(SuiteConfig("nope"))


def test_left_shortfall_is_reported():
    rep = harness.SuiteReport("uinterp-left", {}, passed=1, skipped=9, stats={"shortfall": True})
    assert not rep.ok
