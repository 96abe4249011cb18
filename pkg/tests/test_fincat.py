import itertools

import pytest
from hypothesis import given, strategies as st

from tandisp.catalog import diamond, empty, finset2, monoid_e, z2
from tandisp.fincat import (
    CategoryError, FinCategory, Functor, codiscrete, enumerate_idempotents, enumerate_isos,
    enumerate_monos, enumerate_retract_pairs, functor_orbit, identity_functor, is_cauchy_complete,
    iterate_functor, poset, product_category, validate_category, validate_functor,
)

import oracle
from strategies import categories, posets, transformation_monoids


def test_diamond_every_morphism_is_mono():
    cat = diamond()
    assert enumerate_monos(cat) == frozenset(cat.morphisms)


def test_monoid_e_idempotents():
    assert enumerate_idempotents(monoid_e()) == {"1", "e"}


def test_poset_retract_pairs_are_identities():
    cat = diamond()
    for a in cat.objects:
        assert enumerate_retract_pairs(cat, a) == {(cat.identity(a), cat.identity(a))}


def test_empty_category_enumerations():
    cat = empty()
    assert validate_category(cat).ok
    assert enumerate_monos(cat) == frozenset()
    assert enumerate_idempotents(cat) == frozenset()
    assert is_cauchy_complete(cat)


def test_finset2_counts():
    cat = finset2()
    assert validate_category(cat).ok
    # |hom(n, m)| = m^n
    for n, m in itertools.product(range(3), repeat=2):
        assert len(cat.hom(str(n), str(m))) == m ** n
    assert {cat.dom(f) + cat.cod(f) for f in enumerate_isos(cat)} == {"00", "11", "22"}
    assert len(enumerate_isos(cat)) == 1 + 1 + 2


def test_build_mints_identities():
    cat = FinCategory.build(["a", "b"], {"f": ("a", "b")})
    assert cat.identity("a") == "id_a"
    assert cat.then("id_a", "f") == "f"
    assert validate_category(cat).ok


def test_unknown_object_rejected():
    with pytest.raises(CategoryError):
        FinCategory.build(["a"], {"f": ("a", "b")})


def test_validate_reports_missing_and_associativity():
    arrows = {"g": ("a", "a"), "h": ("a", "a"), "k": ("a", "a")}
    comp = {("g", "g"): "h", ("h", "h"): "h", ("g", "h"): "k", ("h", "g"): "h",
            ("g", "k"): "k", ("k", "g"): "k", ("h", "k"): "k", ("k", "h"): "k"}
    rep = validate_category(FinCategory.build(["a"], arrows, comp))
    kinds = {v.kind for v in rep.violations}
    assert "missing" in kinds  # then(k, k)
    assert "associativity" in kinds  # (g;g);h = h but g;(g;h) = k


def test_identity_functor_orbit():
    orb = functor_orbit(identity_functor(z2()))
    assert (orb.preperiod, orb.period) == (0, 1)


def test_constant_functor_orbit():
    cat = diamond()
    F = Functor(cat, cat, {a: "top" for a in cat.objects}, {f: "id_top" for f in cat.morphisms})
    assert validate_functor(F).ok
    orb = functor_orbit(F)
    assert (orb.preperiod, orb.period) == (1, 1)


def test_swap_functor_orbit():
    cat = codiscrete(["x", "y"])
    sw = {"x": "y", "y": "x"}
    F = Functor(cat, cat, sw, {"id_x": "id_y", "id_y": "id_x", "x~y": "y~x", "y~x": "x~y"})
    orb = functor_orbit(F)
    assert (orb.preperiod, orb.period) == (0, 2)


def test_product_category_is_valid():
    cat = product_category(diamond(), z2())
    assert validate_category(cat).ok
    assert len(cat.morphisms) == 9 * 2


@given(categories())
def test_random_categories_validate(cat):
    rep = validate_category(cat)
    assert rep.ok, rep.as_dict()


@given(categories())
def test_identity_laws_cellwise(cat):
    for f in cat.morphisms:
        assert cat.then(cat.identity(cat.dom(f)), f) == f
        assert cat.then(f, cat.identity(cat.cod(f))) == f


@given(categories())
def test_monos_match_cancellation_oracle(cat):
    t = oracle.Tables(cat)
    assert enumerate_monos(cat) == {m for m in cat.morphisms if oracle.is_mono(t, m)}


@given(transformation_monoids(), st.data())
def test_orbit_minimal_and_periodic(cat, data):
    # endofunctors of a one-object category are monoid endomorphisms; use
    # conjugation-free ones: the identity and constant-to-unit maps, plus
    # any element-wise map that happens to be a homomorphism
    elems = cat.morphisms
    unit = cat.identity("M")
    image = data.draw(st.lists(st.sampled_from(elems), min_size=len(elems), max_size=len(elems)))
    mor = dict(zip(elems, image))
    mor[unit] = unit
    F = Functor(cat, cat, {"M": "M"}, mor)
    if not validate_functor(F).ok:
        F = identity_functor(cat)
    orb = functor_orbit(F)
    pre, per = orb.preperiod, orb.period
    key = lambda k: iterate_functor(F, k).table_key()  # noqa: E731
    assert key(pre + per) == key(pre)
    keys = [key(k) for k in range(pre + per)]
    assert len(set(keys)) == len(keys)
    t = oracle.Tables(cat)
    assert len(oracle.orbit_powers(t, F.obj_map, F.mor_map)) == pre + per


@given(posets())
def test_posets_are_cauchy_complete(cat):
    assert is_cauchy_complete(cat)
    assert enumerate_idempotents(cat) == frozenset(cat.identities().values())


def test_monoid_e_not_cauchy_complete():
    assert not is_cauchy_complete(monoid_e())


def test_poset_generating_pairs_closed():
    cat = poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert "a_c" in cat.morphisms
    assert cat.then("a_b", "b_c") == "a_c"
