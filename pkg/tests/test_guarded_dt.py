import pytest

from resguard.guarded_dt import (
    PRESETS, GuardedDTError, Instance, condition_i, condition_ii, guarded_dt_suite, preset,
    same_up_to_normal_form,
)
from resguard.syntax import parse_term
from resguard.terms import Signature


def t(src):
    return parse_term(src, Signature.LA)


def test_presets_agree():
    assert set(PRESETS) == {"lemma", "la-example"}
    (g1, f1), (g2, f2) = preset("lemma"), preset("la-example")
    assert same_up_to_normal_form(g1, g2) and same_up_to_normal_form(f1, f2)
    assert not same_up_to_normal_form(g1, f1)
    with pytest.raises(GuardedDTError):
        preset("nope")


def test_hand_instances():
    gamma, phi = preset("la-example")
    # w2 = w2 & w1 only gives w2 <= w1, not w1 = 0
    inst = Instance([], t("w2 + w1"), t("w2 & w1"), t("w2"), t("w2 & w1"), ("eq", t("w1"), t("w2")))
    li, ri = condition_i(inst, gamma, phi)
    assert li == ri
    assert li is False
    inst = Instance([], t("w1 + w1"), t("w2 + w2"), t("w1"), t("w2"), ("eq", t("w1"), t("w1")))
    assert condition_i(inst, gamma, phi) == (True, True)
    assert condition_ii(inst, gamma) == (True, True)
    inst = Instance([("eq", t("w1"), t("0"))], t("w1"), t("w2"), t("w1"), t("w2"), ("eq", t("w2"), t("0")))
    lii, rii = condition_ii(inst, gamma)
    assert lii == rii is False


@pytest.mark.parametrize("name", ["lemma", "la-example"])
def test_small_suite(name):
    rep = guarded_dt_suite(name, cases=40, seed=3)
    assert rep.ok, rep.disagreements[:1]
    assert 0 < rep.counts["i_true"] < 40


def test_wrong_family():
    with pytest.raises(GuardedDTError):
        guarded_dt_suite(sig="MV_GUARD", cases=1)
