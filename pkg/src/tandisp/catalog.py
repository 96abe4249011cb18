"""Small worked examples, built in code.

The bundled presentation files in ``tandisp/data`` are generated from these
builders (see ``demos/regenerate_data.py``) and the test-suite checks that
both routes give the same tables.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, Optional, Tuple

from .fincat import (
    FinCategory, Functor, codiscrete, identity_functor, monoid, poset, product_category,
    product_functor,
)
from .tangent import TangentStructure, auto_witnesses, trivial_tangent

Example = Tuple[FinCategory, Optional[TangentStructure]]


def diamond() -> FinCategory:
    return poset(["bot", "a", "b", "top"],
                 [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")], name="diamond")


def vposet() -> FinCategory:
    return poset(["a", "b", "c"], [("a", "c"), ("b", "c")], name="vposet")


def z2() -> FinCategory:
    table = {("1", "1"): "1", ("1", "g"): "g", ("g", "1"): "g", ("g", "g"): "1"}
    return monoid(["1", "g"], table, "1", name="z2", obj="M")


def monoid_e() -> FinCategory:
    table = {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}
    return monoid(["1", "e"], table, "1", name="monoid_e", obj="M")


def weakpb() -> FinCategory:
    """A commuting square whose apex has a non-identity idempotent fixing both legs.

    The cone at the apex then factors through both ``id_X`` and ``t``, so the
    square is a weak pullback but not a pullback.
    """
    arrows = {"xa": ("X", "A"), "xb": ("X", "B"), "ac": ("A", "C"), "bc": ("B", "C"),
              "xc": ("X", "C"), "t": ("X", "X")}
    comp = {("xa", "ac"): "xc", ("xb", "bc"): "xc", ("t", "t"): "t", ("t", "xa"): "xa",
            ("t", "xb"): "xb", ("t", "xc"): "xc"}
    return FinCategory.build(["A", "B", "C", "X"], arrows, comp, name="weakpb")


def finset2() -> FinCategory:
    """Sets of size at most two and all functions; ``2to1_00`` sends both points to 0."""
    objs = ["0", "1", "2"]

    def nm(n, m, vals):
        return f"{n}to{m}_" + "".join(map(str, vals))

    arrows, funcs = {}, {}
    for n, m in itertools.product(range(3), repeat=2):
        for vals in itertools.product(range(m), repeat=n):
            name = nm(n, m, vals)
            arrows[name] = (str(n), str(m))
            funcs[name] = (n, m, vals)
    comp = {}
    for f, (n, m, u) in funcs.items():
        for g, (m2, k, v) in funcs.items():
            if m == m2:
                comp[(f, g)] = nm(n, k, tuple(v[x] for x in u))
    ids = {str(n): nm(n, n, tuple(range(n))) for n in range(3)}
    return FinCategory(objs, arrows, ids, comp, name="finset2")


def z2_sign() -> Example:
    """ℤ/2 with T the identity, p = z = l = g and s = c = n = 1."""
    cat = z2()
    cat.name = "z2_sign"
    T = identity_functor(cat)
    g, one = {"M": "g"}, {"M": "1"}
    ts = TangentStructure(T, dict(g), dict(g), dict(one), dict(g), dict(one), neg=dict(one),
                          tn=auto_witnesses(cat, T, g))
    return cat, ts


def chaotic_swap() -> Example:
    """Two isomorphic objects; T swaps them and every component is the unique arrow."""
    cat = codiscrete(["x", "y"], name="chaotic_swap")
    sw = {"x": "y", "y": "x"}

    def arrow(a, b):
        return cat.hom(a, b)[0]

    T = Functor(cat, cat, dict(sw), {f: arrow(sw[cat.dom(f)], sw[cat.cod(f)]) for f in cat.morphisms})
    p = {a: arrow(sw[a], a) for a in cat.objects}
    z = {a: arrow(a, sw[a]) for a in cat.objects}
    tn = auto_witnesses(cat, T, p)
    s = {a: arrow(tn[(a, 2)].apex, sw[a]) for a in cat.objects}
    l = {a: arrow(sw[a], a) for a in cat.objects}
    c = {a: cat.identity(a) for a in cat.objects}
    n = {a: cat.identity(sw[a]) for a in cat.objects}
    return cat, TangentStructure(T, p, z, s, l, c, neg=n, tn=tn)


def product_tangent(left: Example, right: Example, name=None) -> Example:
    """Componentwise product of two tangent categories, with canonical ``T_2``."""
    (A, ta), (B, tb) = left, right
    cat = product_category(A, B, name=name)
    T = product_functor(ta.T, tb.T, cat, cat)

    def comp(k):
        ca, cb = ta.component(k), tb.component(k)
        return {f"{a}*{b}": f"{ca[a]}*{cb[b]}" for a in A.objects for b in B.objects}

    p = comp("p")
    tn = auto_witnesses(cat, T, p)
    s = {}
    for a in A.objects:
        for b in B.objects:
            # the sum is the product of the factor sums, read through the canonical T_2
            w, wa, wb = tn[(f"{a}*{b}", 2)], ta.t2(a), tb.t2(b)
            cone_a = tuple(pr.split("*")[0] for pr in w.projections)
            cone_b = tuple(pr.split("*")[1] for pr in w.projections)
            first = A.then(wa.mediate(cone_a), ta.s[a])
            second = B.then(wb.mediate(cone_b), tb.s[b])
            s[f"{a}*{b}"] = f"{first}*{second}"
    neg = comp("n") if ta.neg is not None and tb.neg is not None else None
    return cat, TangentStructure(T, p, comp("z"), s, comp("l"), comp("c"), neg=neg, tn=tn)


def diamond_x_swap() -> Example:
    d = diamond()
    return product_tangent((d, trivial_tangent(d)), chaotic_swap(), name="diamond_x_swap")


def t_collapse() -> Example:
    """The diamond with an endofunctor sending ``b`` to ``top``.

    The meet square of ``a`` and ``b`` is a pullback, but its image under the
    functor is not, so it fails to be a T-pullback at k = 1.  No tangent
    structure exists over this functor (there is no arrow ``top -> b``), so
    only the functor is supplied.
    """
    cat = diamond()
    ob = {"bot": "bot", "a": "a", "b": "top", "top": "top"}

    def arrow(x, y):
        return cat.hom(x, y)[0]

    T = Functor(cat, cat, ob, {f: arrow(ob[cat.dom(f)], ob[cat.cod(f)]) for f in cat.morphisms})
    return cat, TangentStructure(T, {}, {}, {}, {}, {})


def empty() -> FinCategory:
    return FinCategory([], {}, {}, {}, name="empty")


def _trivial(build: Callable[[], FinCategory]) -> Callable[[], Example]:
    def make():
        cat = build()
        return cat, trivial_tangent(cat)
    make.__doc__ = f"{build.__name__} with the trivial tangent structure."
    return make


# name -> builder; ``trivial`` marks files written with `tangent trivial`
EXAMPLES: Dict[str, Tuple[Callable[[], Example], str]] = {
    "diamond": (_trivial(diamond), "trivial"),
    "vposet": (_trivial(vposet), "trivial"),
    "z2": (_trivial(z2), "trivial"),
    "z2_sign": (z2_sign, "full"),
    "monoid_e": (_trivial(monoid_e), "trivial"),
    "chaotic_swap": (chaotic_swap, "full"),
    "empty": (_trivial(empty), "trivial"),
    "finset2": (_trivial(finset2), "trivial"),
    "weakpb": (_trivial(weakpb), "trivial"),
    "diamond_x_swap": (diamond_x_swap, "full"),
    "t_collapse": (t_collapse, "functor"),
}


def tangent_examples():
    """Names of examples that carry a full tangent structure."""
    return [k for k, (_, kind) in EXAMPLES.items() if kind != "functor"]


def load_example(name: str) -> Example:
    return EXAMPLES[name][0]()
