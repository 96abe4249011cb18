"""Classification of morphisms and checks on families of morphisms.

A morphism can be a display map, a tangent display map, a submersion, an
étale map or a tangent monic.  Families of morphisms can be checked for the
display-system axioms, retractivity and closure properties.  Every negative
flag carries a counterexample.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

from .fincat import (
    FinCategory, MorId, enumerate_idempotents, enumerate_retract_pairs, functor_orbit,
    is_cauchy_complete, is_mono, iterate_functor, splittings,
)
from .limits import (
    Cospan, Square, all_pullbacks, compute_pullback, is_T_pullback, is_weak_T_pullback,
)
from .tangent import (
    DifferentialBundleData, TangentStructure, check_differential_bundle,
)

__all__ = [
    "DisplayVerdict", "SystemVerdict", "classify_morphism", "classify_all",
    "maximal_tangent_display_system", "check_display_system", "check_retractive",
    "check_split_idempotents_closed", "is_cauchy_complete", "check_well_displayed",
    "check_fully_displayed", "naturality_square",
]


@dataclass
class DisplayVerdict:
    mor: MorId
    is_display: bool
    is_t_display: bool
    is_submersion: bool
    is_etale: bool
    is_t_monic: bool
    witnesses: Dict[str, dict] = field(default_factory=dict)

    def flags(self):
        return {"display": self.is_display, "t_display": self.is_t_display,
                "submersion": self.is_submersion, "etale": self.is_etale, "t_monic": self.is_t_monic}

    def as_dict(self):
        return {"mor": self.mor, "flags": self.flags(),
                "counterexamples": {k: v for k, v in sorted(self.witnesses.items())}}


@dataclass
class SystemVerdict:
    members: FrozenSet[MorId]
    each_member_display: bool = True
    closed_under_pullback: bool = True
    stable_under_T: Optional[bool] = None
    closed_under_composition: bool = True
    retractive: bool = True
    counterexamples: Dict[str, dict] = field(default_factory=dict)

    @property
    def is_display_system(self) -> bool:
        ok = self.each_member_display and self.closed_under_pullback
        return ok and self.stable_under_T is not False

    def as_dict(self):
        return {
            "members": sorted(self.members),
            "each_member_display": self.each_member_display,
            "closed_under_pullback": self.closed_under_pullback,
            "stable_under_T": self.stable_under_T,
            "closed_under_composition": self.closed_under_composition,
            "retractive": self.retractive,
            "is_display_system": self.is_display_system,
            "counterexamples": dict(sorted(self.counterexamples.items())),
        }


@dataclass
class Check:
    """Boolean verdict with an optional counterexample and free-form detail."""

    holds: bool
    counterexample: Optional[dict] = None
    detail: dict = field(default_factory=dict)
    inconclusive: bool = False

    def __bool__(self):
        return self.holds

    def as_dict(self):
        out = {"holds": self.holds, "verdict": self.label}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        out.update(self.detail)
        return out

    @property
    def label(self):
        if self.inconclusive:
            return "inconclusive"
        return "pass" if self.holds else "fail"


# ---------------------------------------------------------------------------
# per-morphism tests


def naturality_square(ts: TangentStructure, q: MorId) -> Square:
    """p-naturality square: top ``p_E``, left ``Tq``, right ``q``, bottom ``p_M``."""
    cat = ts.cat
    return Square(ts.p[cat.dom(q)], ts.p[cat.cod(q)], ts.T.mor(q), q)


def _display_cex(cat, q):
    for f in _into(cat, cat.cod(q)):
        if compute_pullback(cat, Cospan(f, q)) is None:
            return {"cospan": [f, q]}
    return None


def _into(cat, m):
    for x in cat.objects:
        yield from cat.hom(x, m)


def admits_T_pullbacks(cat, T, q):
    """``None`` if every pullback along ``q`` exists and is a T-pullback, else a counterexample."""
    for f in _into(cat, cat.cod(q)):
        cert = compute_pullback(cat, Cospan(f, q))
        if cert is None:
            return {"cospan": [f, q], "reason": "no pullback"}
        v = is_T_pullback(cat, T, cert.square)
        if not v.holds:
            return {"cospan": [f, q], "reason": "not a T-pullback", "failing_k": v.failing_k}
    return None


def classify_morphism(cat: FinCategory, ts: TangentStructure, q: MorId) -> DisplayVerdict:
    def compute():
        T = ts.T
        bound = functor_orbit(T).bound
        wit: Dict[str, dict] = {}
        cex = _display_cex(cat, q)
        is_display = cex is None
        if cex:
            wit["display"] = cex
        is_t_display = True
        for n in range(bound):
            qn = iterate_functor(T, n).mor(q)
            c = admits_T_pullbacks(cat, T, qn)
            if c is not None:
                is_t_display = False
                wit["t_display"] = dict(c, n=n)
                break
        sq = naturality_square(ts, q)
        weak = is_weak_T_pullback(cat, T, sq)
        strict = is_T_pullback(cat, T, sq) if weak.holds else weak
        if not weak.holds:
            wit["submersion"] = dict(weak.counterexample, failing_k=weak.failing_k)
        if not strict.holds:
            wit["etale"] = dict(strict.counterexample, failing_k=strict.failing_k)
        t_monic = True
        for n in range(bound):
            if not is_mono(cat, iterate_functor(T, n).mor(q)):
                t_monic = False
                wit["t_monic"] = {"n": n, "mor": iterate_functor(T, n).mor(q)}
                break
        return DisplayVerdict(q, is_display, is_t_display, weak.holds, strict.holds, t_monic, wit)

    cache = ts.cache.setdefault("classify", {})
    if q not in cache:
        cache[q] = compute()
    return cache[q]


def classify_all(cat, ts) -> Dict[MorId, DisplayVerdict]:
    return {q: classify_morphism(cat, ts, q) for q in cat.morphisms}


# ---------------------------------------------------------------------------
# families


def check_retractive(cat: FinCategory, ts, members: Iterable[MorId]) -> Check:
    members = frozenset(members)
    for f in sorted(members):
        for s, r in sorted(enumerate_retract_pairs(cat, cat.dom(f))):
            sf = cat.then(s, f)
            if sf not in members:
                return Check(False, {"member": f, "section": s, "retraction": r, "composite": sf})
    return Check(True)


def _composition_cex(cat, members):
    for f in sorted(members):
        for g in sorted(members):
            if cat.cod(f) == cat.dom(g) and cat.then(f, g) not in members:
                return {"first": f, "second": g, "composite": cat.then(f, g)}
    return None


def check_display_system(cat: FinCategory, ts: Optional[TangentStructure], members: Iterable[MorId],
                         tangent: bool = True) -> SystemVerdict:
    """Check the (tangent) display-system clauses for a user-supplied family.

    Closure under pullback is judged up to the choice of pullback: some
    pullback of a member along each map must have its pulled-back leg in the
    family.  With ``tangent`` set, only T-pullbacks count and every member must
    admit all T-pullbacks.
    """
    members = frozenset(members)
    unknown = members - set(cat.morphisms)
    if unknown:
        raise KeyError(f"unknown morphisms {sorted(unknown)}")
    out = SystemVerdict(members)
    T = ts.T if (tangent and ts is not None) else None
    for q in sorted(members):
        cex = admits_T_pullbacks(cat, T, q) if T is not None else _display_cex(cat, q)
        if cex is not None:
            out.each_member_display = False
            out.counterexamples.setdefault("each_member_display", dict(cex, member=q))
    for q in sorted(members):
        if not out.closed_under_pullback:
            break
        for f in _into(cat, cat.cod(q)):
            reps = all_pullbacks(cat, Cospan(f, q))
            if T is not None:
                reps = [r for r in reps if is_T_pullback(cat, T, r.square).holds]
            if reps and not any(r.square.leftv in members for r in reps):
                out.closed_under_pullback = False
                out.counterexamples["closed_under_pullback"] = {
                    "member": q, "along": f, "pulled_back": reps[0].square.leftv}
                break
    if T is not None:
        out.stable_under_T = True
        for q in sorted(members):
            if T.mor(q) not in members:
                out.stable_under_T = False
                out.counterexamples["stable_under_T"] = {"member": q, "image": T.mor(q)}
                break
    cex = _composition_cex(cat, members)
    if cex:
        out.closed_under_composition = False
        out.counterexamples["closed_under_composition"] = cex
    r = check_retractive(cat, ts, members)
    out.retractive = r.holds
    if not r.holds:
        out.counterexamples["retractive"] = r.counterexample
    return out


def maximal_tangent_display_system(cat: FinCategory, ts: TangentStructure) -> SystemVerdict:
    members = frozenset(q for q in cat.morphisms if classify_morphism(cat, ts, q).is_t_display)
    return check_display_system(cat, ts, members, tangent=True)


def check_split_idempotents_closed(cat: FinCategory) -> Check:
    """Every idempotent induced on a pullback by a retract of its corner splits.

    For each canonical pullback ``(P, p1, g1)`` of ``g`` along ``f`` and each
    pair ``s_E;r_E = id`` with ``r_E`` out of ``dom g``, the induced ``e`` with
    ``e;p1 = p1`` and ``e;g1 = g1;r_E;s_E`` must split.
    """
    checked = 0
    for g in cat.morphisms:
        E1 = cat.dom(g)
        pairs = sorted(enumerate_retract_pairs(cat, E1))
        if not pairs:
            continue
        for f in _into(cat, cat.cod(g)):
            cert = compute_pullback(cat, Cospan(f, g))
            if cert is None:
                continue
            p1, g1 = cert.square.leftv, cert.square.top
            for sE, rE in pairs:
                if cat.then_path(rE, sE, g) != g:
                    # the retract must sit over the base for e to be induced
                    continue
                e = cert.mediators[(p1, cat.then_path(g1, rE, sE))]
                checked += 1
                if not splittings(cat, e):
                    return Check(False, {"cospan": [f, g], "section": sE, "retraction": rE,
                                         "idempotent": e}, {"checked": checked})
    return Check(True, detail={"checked": checked})


def check_well_displayed(cat: FinCategory, ts: TangentStructure) -> Check:
    for m in cat.objects:
        v = classify_morphism(cat, ts, ts.p[m])
        if not v.is_t_display:
            return Check(False, {"object": m, "projection": ts.p[m], "reason": v.witnesses.get("t_display")})
    return Check(True)


def enumerate_bundle_candidates(cat: FinCategory, ts: TangentStructure, budget: int):
    """Yield every well-typed ``(q, z_q, s_q, l_q)`` over canonical ``E_2``.

    Returns ``(candidates, exhausted)``; ``exhausted`` is false when the
    budget stopped the search early.
    """
    out: List[DifferentialBundleData] = []
    for q in cat.morphisms:
        e, m = cat.dom(q), cat.cod(q)
        cert = compute_pullback(cat, Cospan(q, q))
        if cert is None:
            continue
        e2 = cat.dom(cert.square.top)
        for zq, sq, lq in itertools.product(cat.hom(m, e), cat.hom(e2, e), cat.hom(e, ts.T.ob(e))):
            if len(out) >= budget:
                return out, False
            out.append(DifferentialBundleData(q, zq, sq, lq, cert))
    return out, True


def check_fully_displayed(cat: FinCategory, ts: TangentStructure,
                          bundle_candidates: Optional[Sequence[DifferentialBundleData]] = None,
                          budget: int = 100000) -> Check:
    """Every passing differential bundle among the candidates has a tangent display projection.

    Without explicit candidates a brute-force search runs; if the budget cuts
    it short the verdict is ``inconclusive`` (never a silent pass).
    """
    exhausted = True
    if bundle_candidates is None:
        bundle_candidates, exhausted = enumerate_bundle_candidates(cat, ts, budget)
    passing = 0
    for db in bundle_candidates:
        if not check_differential_bundle(cat, ts, db).ok:
            continue
        passing += 1
        if not classify_morphism(cat, ts, db.q).is_t_display:
            return Check(False, {"bundle": {"q": db.q, "z": db.z_q, "s": db.s_q, "l": db.l_q}},
                         {"passing_bundles": passing})
    detail = {"candidates": len(bundle_candidates), "passing_bundles": passing}
    if not exhausted:
        return Check(False, detail=detail, inconclusive=True)
    return Check(True, detail=detail)
