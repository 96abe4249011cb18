"""Display slice tangent category over a base object, and the Term/Slice checks.

The slice over ``M`` has the tangent display maps into ``M`` as objects,
named ``<q>``, and commuting triangles ``h;q' = q`` as morphisms, named
``<h|q|q'>``.  The tangent bundle of ``q`` is the canonical pullback of
``Tq`` along ``z_M``; every structural component is the mediator of an
explicit cone into such a pullback, recorded in ``provenance``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..display import Check, classify_morphism
from ..fincat import FinCategory, Functor, MorId, ObjId, inverse, validate_category, validate_functor
from ..limits import (
    Cospan, PullbackCertificate, Square, compute_nfold_pullback, compute_pullback, compute_terminal,
    compute_wide_pullback, is_pullback_square, is_T_pullback, universality,
)
from ..tangent import TangentStructure, check_negatives, check_tangent_axioms
from .common import ConstructionError


def _obj(q):
    return f"<{q}>"


def _mor(h, q, q2):
    return f"<{h}|{q}|{q2}>"


@dataclass
class SliceOutput:
    slice_cat: FinCategory
    slice_ts: TangentStructure
    base: ObjId
    # slice object -> underlying morphism; slice morphism -> (underlying, dom q, cod q)
    under_obj: Dict[ObjId, MorId]
    under_mor: Dict[MorId, Tuple[MorId, MorId, MorId]]
    provenance: Dict[str, dict] = field(default_factory=dict)
    # underlying pullback certificate of T q along z for each object q
    vertical: Dict[MorId, PullbackCertificate] = field(default_factory=dict)
    checks: Dict[str, object] = field(default_factory=dict)
    terminal: ObjId = ""

    @property
    def ok(self):
        return all(bool(v) for v in self.checks.values())

    def obj_of(self, q: MorId) -> ObjId:
        return _obj(q)

    def mor_of(self, h: MorId, q: MorId, q2: MorId) -> MorId:
        return _mor(h, q, q2)


def slice_category(cat: FinCategory, objects: List[MorId], base: ObjId, name=None):
    objs = [_obj(q) for q in objects]
    under_obj = {_obj(q): q for q in objects}
    arrows, under = {}, {}
    for q in objects:
        for q2 in objects:
            for h in cat.hom(cat.dom(q), cat.dom(q2)):
                if cat.then(h, q2) == q:
                    name_ = _mor(h, q, q2)
                    arrows[name_] = (_obj(q), _obj(q2))
                    under[name_] = (h, q, q2)
    ids = {_obj(q): _mor(cat.identity(cat.dom(q)), q, q) for q in objects}
    by_dom: Dict[str, list] = {}
    for n, (a, _) in arrows.items():
        by_dom.setdefault(a, []).append(n)
    comp = {}
    for f, (_, b) in arrows.items():
        hf, q, _ = under[f]
        for g in by_dom.get(b, []):
            hg, _, q3 = under[g]
            comp[(f, g)] = _mor(cat.then(hf, hg), q, q3)
    sc = FinCategory(objs, arrows, ids, comp, name=name or f"{cat.name}/{base}")
    return sc, under_obj, under


def _mediate(cert: PullbackCertificate, cone, diagram: str):
    m = cert.mediators.get(tuple(cone))
    if m is None:
        raise ConstructionError(f"no mediator for the {diagram} diagram: cone {tuple(cone)}")
    return m


def slice_tangent_category(cat: FinCategory, ts: TangentStructure, base: ObjId,
                           verify: bool = True) -> SliceOutput:
    if base not in cat.objects:
        raise ConstructionError(f"unknown base object {base!r}")
    T = ts.T
    Tm = T.mor
    zM = ts.z[base]
    members = [q for x in cat.objects for q in cat.hom(x, base) if classify_morphism(cat, ts, q).is_t_display]
    sc, under_obj, under = slice_category(cat, members, base)
    prov: Dict[str, dict] = {}

    vert: Dict[MorId, PullbackCertificate] = {}
    for q in members:
        cert = compute_pullback(cat, Cospan(zM, Tm(q)))
        if cert is None:
            raise ConstructionError(f"no pullback of T{q} along the zero of {base}")
        qM = cert.square.leftv
        if qM not in members:
            raise ConstructionError(f"pulled-back leg {qM} of {q} is not a tangent display map")
        vert[q] = cert

    def qM(q):
        return vert[q].square.leftv

    def iota(q):
        return vert[q].square.top

    obj_map = {_obj(q): _obj(qM(q)) for q in members}
    mor_map = {}
    for f, (h, q, q2) in under.items():
        hM = _mediate(vert[q2], (qM(q), cat.then(iota(q), Tm(h))), "tangent bundle functor")
        mor_map[f] = _mor(hM, qM(q), qM(q2))
        prov[f"T({f})"] = {"diagram": "tangent bundle functor", "cone": [qM(q), cat.then(iota(q), Tm(h))]}
    TM_ = Functor(sc, sc, obj_map, mor_map)

    p, z, l, c = {}, {}, {}, {}
    neg = {} if ts.neg is not None else None
    for q in members:
        x = _obj(q)
        e = cat.dom(q)
        v, io = vert[q], iota(q)
        p[x] = _mor(cat.then(io, ts.p[e]), qM(q), q)
        prov[f"p[{x}]"] = {"diagram": "projection", "composite": [io, ts.p[e]]}
        zc = (q, ts.z[e])
        z[x] = _mor(_mediate(v, zc, "zero morphism"), q, qM(q))
        prov[f"z[{x}]"] = {"diagram": "zero morphism", "cone": list(zc)}
        if neg is not None:
            nc = (qM(q), cat.then(io, ts.neg[e]))
            neg[x] = _mor(_mediate(v, nc, "negation"), qM(q), qM(q))
            prov[f"n[{x}]"] = {"diagram": "negation", "cone": list(nc)}

        # lift and flip go through T applied to the pullback V, then into V2
        q1 = qM(q)
        v2 = vert[q1]
        q2_, io2 = qM(q1), iota(q1)
        tmaps = (Tm(zM), Tm(Tm(q)))
        tapex = T.ob(cat.dom(io))
        tlegs = (Tm(q1), Tm(io))
        ok, tmed, _ = universality(cat, tmaps, tapex, tlegs)
        if not ok:
            raise ConstructionError(f"T does not preserve the vertical pullback of {q}")
        lcone = (cat.then(q1, zM), cat.then(io, ts.l[e]))
        w = tmed.get(lcone)
        if w is None:
            raise ConstructionError(f"no mediator for the vertical lift diagram at {q}")
        l[x] = _mor(_mediate(v2, (q1, w), "vertical lift"), q1, q2_)
        prov[f"l[{x}]"] = {"diagram": "vertical lift", "cone": list(lcone), "then": [q1, w]}

        ccone = (cat.then(q2_, zM), cat.then_path(io2, Tm(io), ts.c[e]))
        w2 = tmed.get(ccone)
        if w2 is None:
            raise ConstructionError(f"no mediator for the canonical flip diagram at {q}")
        c[x] = _mor(_mediate(v2, (q2_, w2), "canonical flip"), q2_, q2_)
        prov[f"c[{x}]"] = {"diagram": "canonical flip", "cone": list(ccone), "then": [q2_, w2]}

    tn, s = {}, {}
    for q in members:
        x = _obj(q)
        e = cat.dom(q)
        wp = compute_nfold_pullback(sc, p[x], 2)
        if wp is None:
            raise ConstructionError(f"no sum pullback at {x} in the slice")
        tn[(x, 2)] = wp
        r = under_obj[wp.apex]
        b1, b2 = (under[pr][0] for pr in wp.projections)
        w0 = ts.t2(e)
        ok, med, _ = universality(cat, w0.maps, w0.apex, w0.projections)
        pairing = med.get((cat.then(b1, iota(q)), cat.then(b2, iota(q))))
        if pairing is None:
            raise ConstructionError(f"no pairing into T_2 for the sum diagram at {x}")
        scone = (r, cat.then(pairing, ts.s[e]))
        s[x] = _mor(_mediate(vert[q], scone, "sum morphism"), r, qM(q))
        prov[f"s[{x}]"] = {"diagram": "sum morphism", "cone": list(scone)}

    sts = TangentStructure(TM_, p, z, s, l, c, neg=neg, tn=tn)
    out = SliceOutput(sc, sts, base, under_obj, under, prov, vert, terminal=_obj(cat.identity(base)))
    if verify:
        out.checks = verify_slice(cat, ts, out)
    return out


def cartesian_checks(out: SliceOutput) -> Dict[str, Check]:
    """Terminal is ``<id_base>``; binary products are pullbacks over the base and T-preserved."""
    sc, sts = out.slice_cat, out.slice_ts
    cat_base_id = _obj_id_base(out)
    checks: Dict[str, Check] = {}
    term_ok = cat_base_id in sc.objects and all(len(sc.hom(x, cat_base_id)) == 1 for x in sc.objects)
    checks["terminal_is_id_base"] = Check(term_ok)
    if not term_ok:
        return checks
    bang = {x: sc.hom(x, cat_base_id)[0] for x in sc.objects}
    products = 0
    for a in sc.objects:
        for b in sc.objects:
            if b < a:
                continue
            w = compute_wide_pullback(sc, (bang[a], bang[b]))
            if w is None:
                checks["binary_products"] = Check(False, {"pair": [a, b]})
                return checks
            products += 1
            sq = Square(w.projections[1], bang[a], w.projections[0], bang[b])
            v = is_T_pullback(sc, sts.T, sq)
            if not v.holds:
                checks["products_preserved_by_T"] = Check(False, {"pair": [a, b], "failing_k": v.failing_k})
                return checks
    checks["binary_products"] = Check(True, detail={"pairs": products})
    checks["products_preserved_by_T"] = Check(True)
    return checks


def _obj_id_base(out: SliceOutput):
    return out.terminal if out.terminal in out.slice_cat.objects else None


def products_are_base_pullbacks(cat: FinCategory, out: SliceOutput) -> Check:
    """Underlying square of each slice product is a pullback in the source."""
    sc = out.slice_cat
    tid = _obj_id_base(out)
    for a in sc.objects:
        for b in sc.objects:
            if b < a:
                continue
            w = compute_wide_pullback(sc, (sc.hom(a, tid)[0], sc.hom(b, tid)[0]))
            if w is None:
                return Check(False, {"pair": [a, b]})
            qa, qb = out.under_obj[a], out.under_obj[b]
            sq = Square(out.under_mor[w.projections[1]][0], qa, out.under_mor[w.projections[0]][0], qb)
            if not is_pullback_square(cat, sq).holds:
                return Check(False, {"pair": [a, b]})
    return Check(True)


def verify_slice(cat, ts, out: SliceOutput) -> Dict[str, object]:
    sc, sts = out.slice_cat, out.slice_ts
    checks: Dict[str, object] = {}
    checks["category"] = Check(validate_category(sc).ok)
    ax = check_tangent_axioms(sc, sts)
    checks["tangent_axioms"] = Check(ax.ok, None if ax.ok else {"failed": ax.failed_equations()})
    if sts.neg is not None:
        checks["negatives"] = Check(check_negatives(sc, sts).ok)
    zp = all(sc.then(sts.z[x], sts.p[x]) == sc.identity(x) for x in sc.objects)
    checks["z;p = id"] = Check(zp)
    checks.update(cartesian_checks(out))
    if checks.get("terminal_is_id_base"):
        checks["products_are_base_pullbacks"] = products_are_base_pullbacks(cat, out)
    return checks


def slice_display_transfer(cat: FinCategory, ts: TangentStructure, base: ObjId, h: MorId,
                           f: MorId, g: MorId, out: Optional[SliceOutput] = None) -> Check:
    """A tangent display map ``h`` with ``h;g = f`` is tangent display in the slice."""
    if cat.cod(h) != cat.dom(g) or cat.then(h, g) != f:
        raise ConstructionError(f"{h} is not a slice morphism from {f} to {g}")
    if not classify_morphism(cat, ts, h).is_t_display:
        raise ConstructionError(f"{h} is not a tangent display map")
    out = out or slice_tangent_category(cat, ts, base, verify=False)
    if _obj(f) not in out.slice_cat.objects or _obj(g) not in out.slice_cat.objects:
        raise ConstructionError(f"{f} or {g} is not an object of the slice over {base}")
    v = classify_morphism(out.slice_cat, out.slice_ts, _mor(h, f, g))
    return Check(v.is_t_display, None if v.is_t_display else v.witnesses.get("t_display"))


# ---------------------------------------------------------------------------
# Term / Slice


def term_slice_unit_counit(cat: FinCategory, ts: TangentStructure, bases=None) -> Dict[str, Check]:
    """Instance checks for the Term/Slice adjunction.

    ``U: X -> X/*`` must be an isomorphism of categories, ``C`` sends ``q``
    to its domain with ``epsilon_q`` the pullback leg into ``TE``, and both
    triangle composites must be identities.  The second triangle slices
    ``X/M`` again over ``<id_M>`` for every base ``M`` in ``bases``.
    """
    star = compute_terminal(cat)
    if star is None:
        raise ConstructionError("category has no terminal object")
    out = slice_tangent_category(cat, ts, star, verify=False)
    sc = out.slice_cat
    checks: Dict[str, Check] = {}
    bang = {m: cat.hom(m, star)[0] for m in cat.objects}
    missing = [m for m in cat.objects if _obj(bang[m]) not in sc.objects]
    if missing:
        raise ConstructionError(f"not cartesian: terminal maps of {missing} are not tangent display")
    U = Functor(cat, sc, {m: _obj(bang[m]) for m in cat.objects},
                {f: _mor(f, bang[cat.dom(f)], bang[cat.cod(f)]) for f in cat.morphisms})
    iso = (validate_functor(U).ok and len(set(U.obj_map.values())) == len(sc.objects)
           and sorted(U.mor_map.values()) == list(sc.morphisms))
    checks["U_isomorphism"] = Check(iso)
    # U commutes with T up to the canonical iso iota
    bad = [m for m in cat.objects if inverse(cat, out.vertical[bang[m]].square.top) is None]
    checks["U_tangent_up_to_iso"] = Check(not bad, {"objects": bad} if bad else None)

    C = Functor(sc, cat, {x: cat.dom(q) for x, q in out.under_obj.items()},
                {f: h for f, (h, _, _) in out.under_mor.items()})
    checks["counit_functor"] = Check(validate_functor(C).ok)
    checks["counit_sends_q_to_E"] = Check(all(C.ob(_obj(q)) == cat.dom(q) for q in out.under_obj.values()))
    # epsilon = iota is natural: C(T^M f);iota = iota;T(C f)
    nat = all(
        cat.then(C.mor(out.slice_ts.T.mor(f)), out.vertical[q2].square.top)
        == cat.then(out.vertical[q].square.top, ts.T.mor(h))
        for f, (h, q, q2) in out.under_mor.items()
    )
    checks["counit_natural"] = Check(nat)
    first = U.then(C)
    checks["triangle_C_after_U"] = Check(
        first.obj_map == {m: m for m in cat.objects} and first.mor_map == {f: f for f in cat.morphisms})

    bases = cat.objects if bases is None else bases
    fails = []
    for M in bases:
        inner = slice_tangent_category(cat, ts, M, verify=False)
        if not _second_triangle(inner, M, cat):
            fails.append(M)
    checks["triangle_slice_of_counit"] = Check(not fails, {"bases": fails} if fails else None,
                                               {"bases_checked": len(bases)})
    return checks


def _second_triangle(inner: SliceOutput, M: ObjId, cat: FinCategory) -> bool:
    """``X/M -> (X/M)/<id_M> -> X/M`` (unit then slice of the counit) is the identity."""
    sc = inner.slice_cat
    top = _obj(cat.identity(M))
    if top not in sc.objects:
        return False
    outer = slice_tangent_category(sc, inner.slice_ts, top, verify=False)
    bang = {x: sc.hom(x, top)[0] for x in sc.objects}
    for x in sc.objects:
        if _obj(bang[x]) not in outer.slice_cat.objects:
            return False
    Uo = {x: _obj(bang[x]) for x in sc.objects}
    Um = {f: _mor(f, bang[sc.dom(f)], bang[sc.cod(f)]) for f in sc.morphisms}
    # slice of the counit: <k> over <id_M> goes to <underlying of k>
    def back_obj(y):
        k = outer.under_obj[y]
        return _obj(inner.under_mor[k][0])

    def back_mor(g):
        k, a, b = outer.under_mor[g]
        h, _, _ = inner.under_mor[k]
        return _mor(h, inner.under_mor[a][0], inner.under_mor[b][0])

    return (all(back_obj(Uo[x]) == x for x in sc.objects)
            and all(back_mor(Um[f]) == f for f in sc.morphisms))
