"""Partial-map restriction category Par(X, M) for a tangent display system of monics.

A partial map ``A -/-> B`` is an isomorphism class of spans ``A <-m- D -f-> B``
with ``m`` in the system; each class is named ``{m|f}`` after its
representative with least apex, then least legs.  Composition pulls back
the monic leg; the restriction of ``{m|f}`` is ``{m|m}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from ..display import Check, check_display_system, classify_morphism
from ..fincat import (
    FinCategory, Functor, MorId, ObjId, enumerate_isos, inverse, is_mono, validate_category,
    validate_functor,
)
from ..limits import Cospan, compute_pullback
from ..tangent import TangentStructure
from .common import ConstructionError


def _name(m, f):
    return f"{{{m}|{f}}}"


@dataclass
class ParOutput:
    par_cat: FinCategory
    restriction: Dict[MorId, MorId]
    monic_system: FrozenSet[MorId]
    span_reps: Dict[MorId, Tuple[MorId, MorId]]
    T: Optional[Functor] = None
    components: Dict[str, Dict[ObjId, MorId]] = field(default_factory=dict)
    checks: Dict[str, object] = field(default_factory=dict)
    # every span (m, f) with m in the system -> name of its class
    classes: Dict[Tuple[MorId, MorId], MorId] = field(default_factory=dict, repr=False)

    @property
    def ok(self):
        return all(bool(v) for v in self.checks.values())

    def span_class(self, m: MorId, f: MorId) -> MorId:
        return self.classes[(m, f)]


def monic_system_clauses(cat: FinCategory, ts: TangentStructure, members: Iterable[MorId]) -> Dict[str, Check]:
    """The five clauses of a tangent display system of monics, each with a witness."""
    members = frozenset(members)
    out: Dict[str, Check] = {}
    bad = sorted(m for m in members if not is_mono(cat, m))
    out["monic"] = Check(not bad, {"morphism": bad[0]} if bad else None)
    bad = sorted(m for m in members if not classify_morphism(cat, ts, m).is_etale)
    out["etale"] = Check(not bad, {"morphism": bad[0]} if bad else None)
    sv = check_display_system(cat, ts, members, tangent=True)
    out["tangent_display_system"] = Check(sv.is_display_system, {
        k: v for k, v in sv.counterexamples.items()
        if k in ("each_member_display", "closed_under_pullback", "stable_under_T")} or None)
    out["closed_under_composition"] = Check(sv.closed_under_composition,
                                            sv.counterexamples.get("closed_under_composition"))
    missing = sorted(enumerate_isos(cat) - members)
    out["contains_isos"] = Check(not missing, {"morphism": missing[0]} if missing else None)
    return out


def _span_classes(cat: FinCategory, members: FrozenSet[MorId]):
    spans = sorted(
        (cat.dom(m), m, f)
        for m in members for b in cat.objects for f in cat.hom(cat.dom(m), b)
    )
    isos = enumerate_isos(cat)
    classes: Dict[Tuple[MorId, MorId], Tuple[ObjId, MorId, MorId]] = {}
    for apex, m, f in spans:
        if (m, f) in classes:
            continue
        rep = (apex, m, f)
        classes[(m, f)] = rep
        # every span isomorphic to the representative: (phi;m, phi;f) for isos phi into apex
        for phi in isos:
            if cat.cod(phi) == apex:
                classes.setdefault((cat.then(phi, m), cat.then(phi, f)), rep)
    return classes


def par_category(cat: FinCategory, ts: TangentStructure, monic_system: Iterable[MorId],
                 verify: bool = True) -> ParOutput:
    members = frozenset(monic_system)
    for clause, chk in monic_system_clauses(cat, ts, members).items():
        if not chk:
            raise ConstructionError(f"monic system fails clause {clause}: {chk.counterexample}")
    classes = _span_classes(cat, members)
    rep_name = {rep: _name(rep[1], rep[2]) for rep in set(classes.values())}
    cls = {k: rep_name[v] for k, v in classes.items()}
    span_reps = {rep_name[r]: (r[1], r[2]) for r in rep_name}
    arrows = {n: (cat.cod(m), cat.cod(f)) for n, (m, f) in span_reps.items()}
    ids = {a: cls[(cat.identity(a), cat.identity(a))] for a in cat.objects}

    def compose(x, y):
        m, f = span_reps[x]
        n, g = span_reps[y]
        cert = compute_pullback(cat, Cospan(f, n))
        if cert is None:
            raise ConstructionError(f"no pullback of {n} along {f}")
        u, v = cert.square.leftv, cert.square.top
        key = (cat.then(u, m), cat.then(v, g))
        if key not in cls:
            raise ConstructionError(f"composite span {key} has its left leg outside the system")
        return cls[key]

    by_dom: Dict[ObjId, list] = {}
    for n, (a, _) in arrows.items():
        by_dom.setdefault(a, []).append(n)
    comp = {(x, y): compose(x, y) for x, (_, b) in arrows.items() for y in by_dom.get(b, [])}
    pc = FinCategory(cat.objects, arrows, ids, comp, name=f"Par({cat.name})")
    restriction = {x: cls[(m, m)] for x, (m, _) in span_reps.items()}

    T = ts.T
    Tpar = Functor(pc, pc, {a: T.ob(a) for a in cat.objects},
                   {x: cls[(T.mor(m), T.mor(f))] for x, (m, f) in span_reps.items()})

    def total(f):
        return cls[(cat.identity(cat.dom(f)), f)]

    comps = {k: {a: total(ts.component(k)[a]) for a in cat.objects} for k in ("p", "z", "l", "c")}
    if ts.neg is not None:
        comps["n"] = {a: total(ts.neg[a]) for a in cat.objects}
    out = ParOutput(pc, restriction, members, span_reps, Tpar, comps, classes=cls)
    if verify:
        out.checks = verify_par(cat, ts, out)
    return out


def check_restriction_equations(pc: FinCategory, r: Dict[MorId, MorId]) -> Dict[str, Check]:
    """R1 to R4 on every (pair of) morphism(s), diagrammatic order."""
    then = pc.then
    out = {}
    bad = [x for x in pc.morphisms if then(r[x], x) != x]
    out["R1"] = Check(not bad, {"morphism": bad[0]} if bad else None)
    r2 = r3 = r4 = None
    for x in pc.morphisms:
        a = pc.dom(x)
        for y in pc.morphisms:
            if pc.dom(y) == a:
                if r2 is None and then(r[x], r[y]) != then(r[y], r[x]):
                    r2 = {"f": x, "g": y}
                if r3 is None and r[then(r[x], y)] != then(r[x], r[y]):
                    r3 = {"f": x, "g": y}
            if pc.dom(y) == pc.cod(x):
                if r4 is None and then(x, r[y]) != then(r[then(x, y)], x):
                    r4 = {"f": x, "g": y}
    out["R2"] = Check(r2 is None, r2)
    out["R3"] = Check(r3 is None, r3)
    out["R4"] = Check(r4 is None, r4)
    return out


def _splits(pc, e, hint):
    a = pc.dom(e)
    if hint is not None:
        rho, sigma = hint
        if pc.then(rho, sigma) == e and pc.then(sigma, rho) == pc.identity(pc.cod(rho)):
            return True
    for x in pc.objects:
        for rho in pc.hom(a, x):
            for sigma in pc.hom(x, a):
                if pc.then(rho, sigma) == e and pc.then(sigma, rho) == pc.identity(x):
                    return True
    return False


def verify_par(cat: FinCategory, ts: TangentStructure, out: ParOutput) -> Dict[str, object]:
    pc, r, cls = out.par_cat, out.restriction, out.classes
    checks: Dict[str, object] = {"category": Check(validate_category(pc).ok)}
    checks.update(check_restriction_equations(pc, r))
    bad = []
    for e in sorted(set(r.values())):
        m, _ = out.span_reps[e]
        d = cat.dom(m)
        hint = (cls.get((m, cat.identity(d))), cls.get((cat.identity(d), m)))
        if None in hint:
            hint = None
        if not _splits(pc, e, hint):
            bad.append(e)
    checks["restriction_idempotents_split"] = Check(not bad, {"idempotent": bad[0]} if bad else None)
    totals = {x for x in pc.morphisms if r[x] == pc.identity(pc.dom(x))}
    bad = [(x, y) for x in totals for y in totals if pc.cod(x) == pc.dom(y) and pc.then(x, y) not in totals]
    checks["totals_compose"] = Check(not bad)
    checks["restriction_of_restriction"] = Check(all(r[r[x]] == r[x] for x in pc.morphisms))
    emb_ok = all(r[cls[(cat.identity(cat.dom(f)), f)]] == pc.identity(cat.dom(f)) for f in cat.morphisms)
    checks["source_maps_total"] = Check(emb_ok)

    T = out.T
    checks["T_functor"] = Check(validate_functor(T).ok)
    checks["T_restriction_functor"] = Check(all(T.mor(r[x]) == r[T.mor(x)] for x in pc.morphisms))
    comps = out.components
    checks["structural_total"] = Check(all(
        r[f] == pc.identity(pc.dom(f)) for k in comps for f in comps[k].values()))
    checks["structural_equations"] = _par_equations(pc, T, comps)
    return checks


def _par_equations(pc, T, comps) -> Check:
    """Naturality of p, z, l, c (and n) in Par plus the equations not involving T_2."""
    then, Tm = pc.then_path, T.mor
    p, z, l, c = comps["p"], comps["z"], comps["l"], comps["c"]
    failures = []
    for x in pc.morphisms:
        a, b = pc.dom(x), pc.cod(x)
        tests = {
            "p natural": (then(Tm(x), p[b]), then(p[a], x)),
            "z natural": (then(x, z[b]), then(z[a], Tm(x))),
            "l natural": (then(Tm(x), l[b]), then(l[a], Tm(Tm(x)))),
            "c natural": (then(Tm(Tm(x)), c[b]), then(c[a], Tm(Tm(x)))),
        }
        if "n" in comps:
            tests["n natural"] = (then(Tm(x), comps["n"][b]), then(comps["n"][a], Tm(x)))
        failures += [{"equation": k, "at": x} for k, (u, v) in tests.items() if u != v]
    for m in pc.objects:
        TM = T.ob(m)
        tests = {
            "z;p = id": (then(z[m], p[m]), pc.identity(m)),
            "l;Tp = p;z": (then(l[m], Tm(p[m])), then(p[m], z[m])),
            "z;l = z;Tz": (then(z[m], l[m]), then(z[m], Tm(z[m]))),
            "c;p_T = Tp": (then(c[m], p[TM]), Tm(p[m])),
            "Tz;c = z_T": (then(Tm(z[m]), c[m]), z[TM]),
            "c;c = id": (then(c[m], c[m]), pc.identity(T.ob(TM))),
            "l;c = l": (then(l[m], c[m]), l[m]),
            "l;Tl = l;l_T": (then(l[m], Tm(l[m])), then(l[m], l[TM])),
            "c_T;Tc;c_T = Tc;c_T;Tc": (then(c[TM], Tm(c[m]), c[TM]), then(Tm(c[m]), c[TM], Tm(c[m]))),
            "l_T;Tc;c_T = c;Tl": (then(l[TM], Tm(c[m]), c[TM]), then(c[m], Tm(l[m]))),
        }
        failures += [{"equation": k, "at": m} for k, (u, v) in tests.items() if u != v]
    return Check(not failures, failures[0] if failures else None, {"violations": len(failures)})
