"""Open subobjects: tangent monic, tangent display, étale maps, ordered by factorisation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from ..display import Check, classify_morphism
from ..fincat import FinCategory, MorId, ObjId, enumerate_isos
from ..limits import Cospan, compute_pullback
from ..tangent import TangentStructure
from .par import ParOutput, monic_system_clauses, par_category


@dataclass
class OpenPoset:
    members: FrozenSet[MorId]
    # canonical representative monic of each iso-class, grouped by codomain
    elements: Dict[ObjId, List[MorId]]
    leq: FrozenSet[Tuple[MorId, MorId]]
    meets: Dict[Tuple[MorId, MorId], Optional[MorId]]
    checks: Dict[str, object] = field(default_factory=dict)
    par: Optional[ParOutput] = None

    @property
    def ok(self):
        return all(bool(v) for v in self.checks.values())

    def as_dict(self):
        return {
            "members": sorted(self.members),
            "elements": {k: v for k, v in sorted(self.elements.items())},
            "order": [list(p) for p in sorted(self.leq)],
            "meets": [{"pair": list(k), "meet": v} for k, v in sorted(self.meets.items())],
        }


def open_members(cat: FinCategory, ts: TangentStructure) -> FrozenSet[MorId]:
    out = set()
    for q in cat.morphisms:
        v = classify_morphism(cat, ts, q)
        if v.is_t_monic and v.is_t_display and v.is_etale:
            out.add(q)
    return frozenset(out)


def _factors(cat, m, n):
    return any(cat.then(k, n) == m for k in cat.hom(cat.dom(m), cat.dom(n)))


def open_subobjects(cat: FinCategory, ts: TangentStructure, build_par: bool = True) -> OpenPoset:
    members = open_members(cat, ts)
    isos = enumerate_isos(cat)
    rep: Dict[MorId, MorId] = {}
    for m in sorted(members, key=lambda x: (cat.dom(x), x)):
        if m in rep:
            continue
        rep[m] = m
        for phi in isos:
            if cat.cod(phi) == cat.dom(m):
                rep.setdefault(cat.then(phi, m), m)
    elements: Dict[ObjId, List[MorId]] = {}
    for m in sorted(set(rep.values())):
        elements.setdefault(cat.cod(m), []).append(m)
    leq = frozenset((a, b) for els in elements.values() for a in els for b in els if _factors(cat, a, b))
    meets: Dict[Tuple[MorId, MorId], Optional[MorId]] = {}
    meet_fail = None
    for base, els in elements.items():
        for a in els:
            for b in els:
                if b < a:
                    continue
                cert = compute_pullback(cat, Cospan(a, b))
                if cert is None:
                    meets[(a, b)] = None
                    continue
                mm = cat.then(cert.square.leftv, a)
                meet = rep.get(mm)
                meets[(a, b)] = meet
                lower = [x for x in els if (x, a) in leq and (x, b) in leq]
                glb = meet is not None and all((x, meet) in leq for x in lower) and meet in lower
                if not glb and meet_fail is None:
                    meet_fail = {"pair": [a, b], "meet": meet}
    poset = OpenPoset(members, elements, leq, meets)
    checks: Dict[str, object] = {}
    antisym = all(not ((a, b) in leq and (b, a) in leq) or a == b for a, b in leq)
    checks["partial_order"] = Check(antisym)
    checks["meets_are_pullbacks"] = Check(meet_fail is None, meet_fail)
    clauses = monic_system_clauses(cat, ts, members)
    for k, v in clauses.items():
        checks[f"system_{k}"] = v
    poset.checks = checks
    if build_par and all(clauses.values()):
        poset.par = par_category(cat, ts, members)
    return poset
