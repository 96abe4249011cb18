import dataclasses

import pytest
from hypothesis import given

from tandisp.catalog import diamond, load_example, z2
from tandisp.fincat import enumerate_retract_pairs
from tandisp.limits import InputError
from tandisp.tangent import (
    DifferentialBundleData, canonical_bundle, check_differential_bundle, check_negatives,
    check_tangent_axioms, compute_vertical_bundle, trivial_tangent,
)

from strategies import categories

GROUPS = {"0", "i", "ii", "iii", "iv", "v", "vi", "vii"}


@given(categories())
def test_trivial_structure_always_passes(cat):
    ts = trivial_tangent(cat)
    rep = check_tangent_axioms(cat, ts)
    assert rep.ok, rep.failed_equations()
    assert check_negatives(cat, ts).ok


def test_every_example_passes_axioms_and_negatives(example):
    name, cat, ts = example
    rep = check_tangent_axioms(cat, ts)
    assert rep.ok, (name, rep.failed_equations())
    if cat.objects:
        assert set(rep.checked) == GROUPS
    if ts.neg is not None:
        assert check_negatives(cat, ts).ok


def test_zero_and_projection_form_retract_pair(example):
    _, cat, ts = example
    for m in cat.objects:
        assert (ts.z[m], ts.p[m]) in enumerate_retract_pairs(cat, ts.T.ob(m))


def test_tangent_bundle_is_differential_bundle(example):
    _, cat, ts = example
    for m in cat.objects:
        rep = check_differential_bundle(cat, ts, canonical_bundle(ts, m))
        assert rep.ok, rep.failures[:2]


def test_broken_sum_is_named_failure():
    cat, ts = load_example("z2_sign")
    bad = dataclasses.replace(ts, s={"M": "g"}, cache={})
    rep = check_tangent_axioms(cat, bad)
    assert not rep.ok
    groups = {g for g, _ in rep.failed_equations()}
    assert "i" in groups
    assert all(isinstance(eq, str) and eq for _, eq in rep.failed_equations())


def test_broken_flip_is_named_failure():
    cat, ts = load_example("z2_sign")
    bad = dataclasses.replace(ts, c={"M": "g"}, cache={})
    rep = check_tangent_axioms(cat, bad)
    assert ("iv", "l;c = l") in rep.failed_equations()


def test_negatives_absent_is_input_error():
    cat = z2()
    ts = trivial_tangent(cat, negatives=False)
    with pytest.raises(InputError):
        check_negatives(cat, ts)


def test_vertical_bundle_trivial_and_identity():
    cat = diamond()
    ts = trivial_tangent(cat)
    apex, _ = compute_vertical_bundle(cat, ts, "bot_a")
    assert apex == "bot"
    apex, _ = compute_vertical_bundle(cat, ts, "id_top")
    assert apex == "top"


def test_vertical_bundle_is_meet_in_diamond():
    # with trivial T, VE is the pullback of q along id: its domain
    cat = diamond()
    ts = trivial_tangent(cat)
    for q in cat.morphisms:
        apex, cert = compute_vertical_bundle(cat, ts, q)
        assert apex == cat.dom(q)


def test_bundle_requires_certificate():
    cat = diamond()
    ts = trivial_tangent(cat)
    with pytest.raises(InputError):
        check_differential_bundle(cat, ts, DifferentialBundleData("id_a", "id_a", "id_a", "id_a", None))


def test_wrong_lift_fails_conditions():
    cat, ts = load_example("z2_sign")
    broken = dataclasses.replace(canonical_bundle(ts, "M"), l_q="1")
    assert not check_differential_bundle(cat, ts, broken).ok
