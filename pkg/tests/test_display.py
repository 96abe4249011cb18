import pytest

from tandisp.catalog import load_example
from tandisp.constructions import open_members
from tandisp.display import (
    admits_T_pullbacks, check_display_system, check_fully_displayed, check_retractive,
    check_split_idempotents_closed, check_well_displayed, classify_all, classify_morphism,
    maximal_tangent_display_system, naturality_square,
)
from tandisp.fincat import is_cauchy_complete
from tandisp.limits import is_T_pullback

import oracle


def test_flag_implications_and_counterexamples(example):
    _, cat, ts = example
    for q, v in classify_all(cat, ts).items():
        assert not v.is_etale or v.is_submersion
        assert not v.is_t_display or v.is_display
        for flag, value in v.flags().items():
            if not value:
                assert flag in v.witnesses, (q, flag)


def test_flags_match_brute_force(example):
    _, cat, ts = example
    t = oracle.Tables(cat)
    T_mor = dict(ts.T.mor_map)
    powers = oracle.orbit_powers(t, dict(ts.T.obj_map), T_mor)
    for q, v in classify_all(cat, ts).items():
        assert v.is_t_display == oracle.is_t_display(t, powers, q), q
        assert v.is_etale == oracle.is_etale(t, powers, ts.p, T_mor, q), q
        assert v.is_t_monic == all(oracle.is_mono(t, m[q]) for _, m in powers), q
        assert v.is_display == all(oracle.has_pullback(t, f, q) is not None for f in t.into(cat.cod(q)))


def test_diamond_all_t_display_and_well_displayed():
    cat, ts = load_example("diamond")
    assert all(v.is_t_display for v in classify_all(cat, ts).values())
    assert check_well_displayed(cat, ts).holds


def test_vposet_legs_are_not_display():
    cat, ts = load_example("vposet")
    v = classify_morphism(cat, ts, "a_c")
    assert not v.is_display
    assert v.witnesses["display"]["cospan"] == ["b_c", "a_c"]


def test_maximal_system_is_closed_system(example):
    _, cat, ts = example
    sv = maximal_tangent_display_system(cat, ts)
    assert sv.is_display_system and sv.stable_under_T
    assert sv.closed_under_composition


def test_empty_family_is_a_system():
    cat, ts = load_example("diamond")
    assert check_display_system(cat, ts, []).is_display_system


def test_family_not_closed_under_pullback():
    cat, ts = load_example("diamond")
    sv = check_display_system(cat, ts, ["a_top"])
    assert not sv.closed_under_pullback
    assert sv.counterexamples["closed_under_pullback"]["member"] == "a_top"


def test_family_not_stable_under_T():
    cat, ts = load_example("chaotic_swap")
    sv = check_display_system(cat, ts, ["x~y"])
    assert sv.stable_under_T is False
    assert sv.counterexamples["stable_under_T"] == {"member": "x~y", "image": "y~x"}


def test_family_with_non_display_member():
    cat, ts = load_example("vposet")
    sv = check_display_system(cat, ts, ["a_c"])
    assert not sv.each_member_display and not sv.is_display_system


def test_unknown_member_rejected():
    cat, ts = load_example("diamond")
    with pytest.raises(KeyError):
        check_display_system(cat, ts, ["nope"])


def test_retractive_counterexample():
    cat, _ = load_example("finset2")
    r = check_retractive(cat, None, ["2to2_01"])
    assert not r.holds
    assert r.counterexample["member"] == "2to2_01"


def test_split_closed_is_weaker_than_cauchy_complete():
    cat, _ = load_example("monoid_e")
    assert check_split_idempotents_closed(cat).holds
    assert not is_cauchy_complete(cat)


def test_fully_displayed_and_budget():
    cat, ts = load_example("finset2")
    assert check_fully_displayed(cat, ts).holds
    small = check_fully_displayed(cat, ts, budget=3)
    assert small.inconclusive and small.label == "inconclusive"


def test_etale_naturality_squares(example):
    _, cat, ts = example
    for q, v in classify_all(cat, ts).items():
        if v.is_etale:
            assert is_T_pullback(cat, ts.T, naturality_square(ts, q)).holds


def test_display_submersion_after_open_is_open(example):
    _, cat, ts = example
    opens = open_members(cat, ts)
    for q in cat.morphisms:
        v = classify_morphism(cat, ts, q)
        if not (v.is_t_display and v.is_submersion):
            continue
        for m in opens:
            if cat.cod(m) == cat.dom(q):
                assert cat.then(m, q) in opens, (m, q)


def test_t_collapse_pullback_not_t_display():
    cat, ts = load_example("t_collapse")
    cex = admits_T_pullbacks(cat, ts.T, "b_top")
    assert cex is not None and cex["reason"] == "not a T-pullback"
