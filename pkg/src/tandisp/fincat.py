"""Finite categories presented by tables.

A :class:`FinCategory` stores its objects, its morphisms with domain and
codomain, one identity per object and a composition table.  Composition is
written in diagrammatic order: ``cat.then(f, g)`` is "first ``f``, then
``g``".  Identifiers are plain strings and identifier equality is the only
equality used anywhere in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

ObjId = str
MorId = str


class CategoryError(ValueError):
    """Raised for structurally malformed tables (unknown identifiers etc.)."""


@dataclass(frozen=True)
class Violation:
    kind: str
    cells: Tuple[str, ...]
    message: str

    def as_dict(self):
        return {"kind": self.kind, "cells": list(self.cells), "message": self.message}


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind, cells, message):
        self.violations.append(Violation(kind, tuple(cells), message))

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "violations": [v.as_dict() for v in self.violations]}


class FinCategory:
    """A finite category given by explicit tables.

    The constructor only rejects references to unknown identifiers.  Law
    violations (missing composites, bad typing, non-associativity) are
    accepted and reported by :func:`validate_category`.
    """

    def __init__(
        self,
        objects: Iterable[ObjId],
        arrows: Mapping[MorId, Tuple[ObjId, ObjId]],
        identities: Mapping[ObjId, MorId],
        composition: Mapping[Tuple[MorId, MorId], MorId],
        name: str = "",
    ):
        self.name = name
        self.objects: Tuple[ObjId, ...] = tuple(sorted(set(objects)))
        objset = set(self.objects)
        self._dom: Dict[MorId, ObjId] = {}
        self._cod: Dict[MorId, ObjId] = {}
        for f, (a, b) in arrows.items():
            if a not in objset or b not in objset:
                raise CategoryError(f"morphism {f!r} refers to an unknown object")
            self._dom[f] = a
            self._cod[f] = b
        self.morphisms: Tuple[MorId, ...] = tuple(sorted(self._dom))
        for obj, i in identities.items():
            if obj not in objset or i not in self._dom:
                raise CategoryError(f"identity of {obj!r} refers to unknown data")
        missing = objset - set(identities)
        if missing:
            raise CategoryError(f"no identity for objects {sorted(missing)}")
        self._id: Dict[ObjId, MorId] = dict(identities)
        for (f, g), h in composition.items():
            for x in (f, g, h):
                if x not in self._dom:
                    raise CategoryError(f"composition entry uses unknown morphism {x!r}")
        self._comp: Dict[Tuple[MorId, MorId], MorId] = dict(composition)

        self._hom: Dict[Tuple[ObjId, ObjId], Tuple[MorId, ...]] = {}
        for f in self.morphisms:
            self._hom.setdefault((self._dom[f], self._cod[f]), ())
            self._hom[(self._dom[f], self._cod[f])] += (f,)
        self._memo: dict = {}

    # -- construction helpers -------------------------------------------

    @classmethod
    def build(cls, objects, arrows, composition=(), name="", identities=None):
        """Build a category, minting ``id_M`` identities where none is given.

        Composites with identities are filled in automatically, so callers
        only list the composites of non-identity morphisms.
        """
        arrows = dict(arrows)
        ids = dict(identities or {})
        for obj in objects:
            if obj not in ids:
                ids[obj] = f"id_{obj}"
            arrows.setdefault(ids[obj], (obj, obj))
        comp = dict(composition)
        for f, (a, b) in arrows.items():
            if a not in ids or b not in ids:
                continue  # unknown endpoint; the constructor reports it
            comp.setdefault((ids[a], f), f)
            comp.setdefault((f, ids[b]), f)
        return cls(objects, arrows, ids, comp, name=name)

    # -- basic accessors ------------------------------------------------

    def dom(self, f: MorId) -> ObjId:
        return self._dom[f]

    def cod(self, f: MorId) -> ObjId:
        return self._cod[f]

    def identity(self, obj: ObjId) -> MorId:
        return self._id[obj]

    def hom(self, a: ObjId, b: ObjId) -> Tuple[MorId, ...]:
        return self._hom.get((a, b), ())

    def then(self, f: MorId, g: MorId) -> MorId:
        """The composite "f then g"; raises ``KeyError`` when undefined."""
        return self._comp[(f, g)]

    def then_path(self, *fs: MorId) -> MorId:
        out = fs[0]
        for g in fs[1:]:
            out = self._comp[(out, g)]
        return out

    def composable(self, f: MorId, g: MorId) -> bool:
        return self._cod[f] == self._dom[g]

    def is_identity(self, f: MorId) -> bool:
        return self._id.get(self._dom[f]) == f

    def identities(self) -> Dict[ObjId, MorId]:
        return dict(self._id)

    def arrows(self) -> Dict[MorId, Tuple[ObjId, ObjId]]:
        return {f: (self._dom[f], self._cod[f]) for f in self.morphisms}

    def composition(self) -> Dict[Tuple[MorId, MorId], MorId]:
        return dict(self._comp)

    def memo(self, key, compute):
        """Per-instance cache for derived data; categories are immutable."""
        try:
            return self._memo[key]
        except KeyError:
            value = self._memo[key] = compute()
            return value

    def __repr__(self):
        return (f"FinCategory({self.name!r}, {len(self.objects)} objects, "
                f"{len(self.morphisms)} morphisms)")

    def same_tables(self, other: "FinCategory") -> bool:
        return (
            self.objects == other.objects
            and self.arrows() == other.arrows()
            and self._id == other._id
            and self._comp == other._comp
        )


def validate_category(cat: FinCategory) -> ValidationReport:
    """List every violated typing, totality, identity or associativity cell."""
    rep = ValidationReport()
    for (f, g), h in sorted(cat.composition().items()):
        if not cat.composable(f, g):
            rep.add("non-composable", (f, g), f"then({f},{g}) is defined but cod {f} != dom {g}")
            continue
        if cat.dom(h) != cat.dom(f) or cat.cod(h) != cat.cod(g):
            rep.add(
                "typing", (f, g, h),
                f"then({f},{g})={h} has type {cat.dom(h)}->{cat.cod(h)}, "
                f"expected {cat.dom(f)}->{cat.cod(g)}",
            )
    comp = cat.composition()
    for f in cat.morphisms:
        b = cat.cod(f)
        for c in cat.objects:
            for g in cat.hom(b, c):
                if (f, g) not in comp:
                    rep.add("missing", (f, g), f"then({f},{g}) is undefined")
    for obj in cat.objects:
        i = cat.identity(obj)
        if cat.dom(i) != obj or cat.cod(i) != obj:
            rep.add("typing", (i,), f"identity {i} of {obj} is not an endomorphism of {obj}")
    for f in cat.morphisms:
        ia, ib = cat.identity(cat.dom(f)), cat.identity(cat.cod(f))
        if comp.get((ia, f)) != f:
            rep.add("identity", (ia, f), f"then({ia},{f}) != {f}")
        if comp.get((f, ib)) != f:
            rep.add("identity", (f, ib), f"then({f},{ib}) != {f}")
    for f in cat.morphisms:
        for g in _out(cat, f):
            fg = comp.get((f, g))
            if fg is None:
                continue
            for h in _out(cat, g):
                gh = comp.get((g, h))
                if gh is None:
                    continue
                left, right = comp.get((fg, h)), comp.get((f, gh))
                if left is not None and right is not None and left != right:
                    rep.add("associativity", (f, g, h),
                            f"({f};{g});{h}={left} but {f};({g};{h})={right}")
    return rep


def _out(cat: FinCategory, f: MorId):
    b = cat.cod(f)
    for c in cat.objects:
        yield from cat.hom(b, c)


# ---------------------------------------------------------------------------
# functors and natural transformations


@dataclass(frozen=True)
class Functor:
    source: FinCategory
    target: FinCategory
    obj_map: Mapping[ObjId, ObjId]
    mor_map: Mapping[MorId, MorId]

    def __call__(self, x):
        """Apply to an object or morphism identifier."""
        if x in self.mor_map and x in self.obj_map:
            raise CategoryError(f"{x!r} is both an object and a morphism")
        if x in self.mor_map:
            return self.mor_map[x]
        return self.obj_map[x]

    def ob(self, a: ObjId) -> ObjId:
        return self.obj_map[a]

    def mor(self, f: MorId) -> MorId:
        return self.mor_map[f]

    def then(self, other: "Functor") -> "Functor":
        """Diagrammatic composite: apply ``self`` first."""
        return Functor(
            self.source, other.target,
            {a: other.obj_map[b] for a, b in self.obj_map.items()},
            {f: other.mor_map[g] for f, g in self.mor_map.items()},
        )

    def table_key(self):
        return (tuple(sorted(self.obj_map.items())), tuple(sorted(self.mor_map.items())))

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.table_key() == other.table_key())

    def __hash__(self):
        return hash(self.table_key())


def identity_functor(cat: FinCategory) -> Functor:
    return Functor(cat, cat, {a: a for a in cat.objects}, {f: f for f in cat.morphisms})


def validate_functor(F: Functor) -> ValidationReport:
    rep = ValidationReport()
    S, T = F.source, F.target
    for a in S.objects:
        if a not in F.obj_map:
            rep.add("partial", (a,), f"object {a} is not mapped")
        elif F.obj_map[a] not in T.objects:
            rep.add("typing", (a,), f"object {a} maps outside the target")
    for f in S.morphisms:
        if f not in F.mor_map:
            rep.add("partial", (f,), f"morphism {f} is not mapped")
        elif F.mor_map[f] not in T.morphisms:
            rep.add("typing", (f,), f"morphism {f} maps outside the target")
    if not rep.ok:
        return rep
    for f in S.morphisms:
        Ff = F.mor_map[f]
        if T.dom(Ff) != F.obj_map[S.dom(f)] or T.cod(Ff) != F.obj_map[S.cod(f)]:
            rep.add("typing", (f,), f"F({f})={Ff} does not have type F(dom)->F(cod)")
    for a in S.objects:
        if F.mor_map[S.identity(a)] != T.identity(F.obj_map[a]):
            rep.add("identity", (a,), f"F(id {a}) is not the identity of F({a})")
    for (f, g), h in sorted(S.composition().items()):
        Ff, Fg = F.mor_map[f], F.mor_map[g]
        try:
            got = T.then(Ff, Fg)
        except KeyError:
            rep.add("composition", (f, g), f"then(F{f},F{g}) undefined in target")
            continue
        if got != F.mor_map[h]:
            rep.add("composition", (f, g), f"F({f};{g})={F.mor_map[h]} but F{f};F{g}={got}")
    return rep


@dataclass(frozen=True)
class NatTransformation:
    """A family ``components[A]: F(A) -> G(A)``."""

    source: Functor
    target: Functor
    components: Mapping[ObjId, MorId]

    def __getitem__(self, a: ObjId) -> MorId:
        return self.components[a]


def identity_nat(F: Functor) -> NatTransformation:
    return NatTransformation(F, F, {a: F.target.identity(F.ob(a)) for a in F.source.objects})


def validate_nat(alpha: NatTransformation) -> ValidationReport:
    rep = ValidationReport()
    F, G = alpha.source, alpha.target
    S, T = F.source, F.target
    for a in S.objects:
        c = alpha.components.get(a)
        if c is None:
            rep.add("partial", (a,), f"no component at {a}")
            continue
        if T.dom(c) != F.ob(a) or T.cod(c) != G.ob(a):
            rep.add("typing", (a, c), f"component {c} at {a} is not F({a})->G({a})")
    if not rep.ok:
        return rep
    for f in S.morphisms:
        a, b = S.dom(f), S.cod(f)
        lhs = T.then(F.mor(f), alpha[b])
        rhs = T.then(alpha[a], G.mor(f))
        if lhs != rhs:
            rep.add("naturality", (f,), f"square at {f}: F{f};a_{b}={lhs} != a_{a};G{f}={rhs}")
    return rep


# ---------------------------------------------------------------------------
# iterates and orbits


@dataclass(frozen=True)
class FunctorOrbit:
    preperiod: int
    period: int

    @property
    def bound(self) -> int:
        """Number of distinct iterates F^0 .. F^(bound-1)."""
        return self.preperiod + self.period


def iterate_functor(F: Functor, n: int) -> Functor:
    if F.source is not F.target:
        raise CategoryError("iterate_functor needs an endofunctor")
    cat = F.source
    powers = cat.memo(("powers", id(F)), lambda: [identity_functor(cat)])
    # keep F alive alongside the cache key
    cat.memo(("powers-owner", id(F)), lambda: F)
    while len(powers) <= n:
        powers.append(powers[-1].then(F))
    return powers[n]


def functor_orbit(F: Functor) -> FunctorOrbit:
    """Minimal (preperiod, period) with F^(pre+per) == F^pre as full tables."""
    cat = F.source

    def compute():
        seen = {}
        k = 0
        while True:
            key = iterate_functor(F, k).table_key()
            if key in seen:
                pre = seen[key]
                return FunctorOrbit(pre, k - pre)
            seen[key] = k
            k += 1

    cat.memo(("orbit-owner", id(F)), lambda: F)
    return cat.memo(("orbit", id(F)), compute)


# ---------------------------------------------------------------------------
# enumerations


def is_mono(cat: FinCategory, m: MorId) -> bool:
    a = cat.dom(m)
    for x in cat.objects:
        seen = set()
        for u in cat.hom(x, a):
            v = cat.then(u, m)
            if v in seen:
                return False
            seen.add(v)
    return True


def is_iso(cat: FinCategory, f: MorId) -> bool:
    return inverse(cat, f) is not None


def inverse(cat: FinCategory, f: MorId) -> Optional[MorId]:
    a, b = cat.dom(f), cat.cod(f)
    for g in cat.hom(b, a):
        if cat.then(f, g) == cat.identity(a) and cat.then(g, f) == cat.identity(b):
            return g
    return None


def enumerate_monos(cat: FinCategory) -> frozenset:
    return cat.memo("monos", lambda: frozenset(m for m in cat.morphisms if is_mono(cat, m)))


def enumerate_isos(cat: FinCategory) -> frozenset:
    return cat.memo("isos", lambda: frozenset(f for f in cat.morphisms if is_iso(cat, f)))


def enumerate_idempotents(cat: FinCategory) -> frozenset:
    return frozenset(
        e for e in cat.morphisms
        if cat.dom(e) == cat.cod(e) and cat.then(e, e) == e
    )


def enumerate_retract_pairs(cat: FinCategory, target: ObjId) -> frozenset:
    """Pairs ``(s, r)`` with ``s: E -> target``, ``r: target -> E`` and ``s;r = id_E``."""
    out = set()
    for e in cat.objects:
        ide = cat.identity(e)
        for s in cat.hom(e, target):
            for r in cat.hom(target, e):
                if cat.then(s, r) == ide:
                    out.add((s, r))
    return frozenset(out)


def splittings(cat: FinCategory, e: MorId):
    """All ``(r, s)`` with ``r;s = e`` and ``s;r`` an identity."""
    m = cat.dom(e)
    out = []
    for x in cat.objects:
        idx = cat.identity(x)
        for r in cat.hom(m, x):
            for s in cat.hom(x, m):
                if cat.then(r, s) == e and cat.then(s, r) == idx:
                    out.append((r, s))
    return out


def is_cauchy_complete(cat: FinCategory) -> bool:
    return all(splittings(cat, e) for e in enumerate_idempotents(cat))


def find_isomorphism(cat: FinCategory, a: ObjId, b: ObjId) -> Optional[MorId]:
    for f in cat.hom(a, b):
        if inverse(cat, f) is not None:
            return f
    return None


# ---------------------------------------------------------------------------
# small builders used by examples and tests


def discrete(objects, name="discrete") -> FinCategory:
    return FinCategory.build(objects, {}, name=name)


def poset(elements, less_eq, name="poset") -> FinCategory:
    """Category of a finite poset; ``less_eq`` lists generating pairs (a, b) with a <= b.

    The reflexive-transitive closure is taken, so only covering pairs are needed.
    Morphism ``a<b`` is named ``a_b``.
    """
    elements = list(elements)
    le = {(a, a) for a in elements} | set(less_eq)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(le), repeat=2):
            if b == c and (a, d) not in le:
                le.add((a, d))
                changed = True
    names = {(a, b): (f"id_{a}" if a == b else f"{a}_{b}") for (a, b) in le}
    arrows = {names[k]: k for k in le}
    comp = {}
    for (a, b) in le:
        for (c, d) in le:
            if b == c:
                comp[(names[(a, b)], names[(c, d)])] = names[(a, d)]
    ids = {a: names[(a, a)] for a in elements}
    return FinCategory(elements, arrows, ids, comp, name=name)


def monoid(elements, table, unit, name="monoid", obj="*") -> FinCategory:
    """One-object category; ``table[(x, y)]`` is "x then y"."""
    arrows = {x: (obj, obj) for x in elements}
    comp = {(x, y): table[(x, y)] for x in elements for y in elements}
    return FinCategory([obj], arrows, {obj: unit}, comp, name=name)


def codiscrete(objects, name="codiscrete") -> FinCategory:
    """Exactly one morphism ``a~b`` between any two objects."""
    objects = list(objects)

    def nm(a, b):
        return f"id_{a}" if a == b else f"{a}~{b}"

    arrows = {nm(a, b): (a, b) for a in objects for b in objects}
    comp = {(nm(a, b), nm(b, c)): nm(a, c) for a in objects for b in objects for c in objects}
    return FinCategory(objects, arrows, {a: nm(a, a) for a in objects}, comp, name=name)


def product_category(A: FinCategory, B: FinCategory, name=None) -> FinCategory:
    """Product category; cell ``(x, y)`` is named ``x*y``."""

    def nm(x, y):
        return f"{x}*{y}"

    objs = [nm(a, b) for a in A.objects for b in B.objects]
    arrows = {
        nm(f, g): (nm(A.dom(f), B.dom(g)), nm(A.cod(f), B.cod(g)))
        for f in A.morphisms for g in B.morphisms
    }
    ids = {nm(a, b): nm(A.identity(a), B.identity(b)) for a in A.objects for b in B.objects}
    comp = {}
    for (f1, f2), f3 in A.composition().items():
        for (g1, g2), g3 in B.composition().items():
            comp[(nm(f1, g1), nm(f2, g2))] = nm(f3, g3)
    return FinCategory(objs, arrows, ids, comp, name=name or f"{A.name}*{B.name}")


def product_functor(F: Functor, G: Functor, source: FinCategory, target: FinCategory) -> Functor:
    return Functor(
        source, target,
        {f"{a}*{b}": f"{F.ob(a)}*{G.ob(b)}" for a in F.source.objects for b in G.source.objects},
        {f"{f}*{g}": f"{F.mor(f)}*{G.mor(g)}" for f in F.source.morphisms for g in G.source.morphisms},
    )
