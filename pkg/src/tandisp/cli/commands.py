"""Command implementations.  Each returns ``(result, checks)``.

``checks`` maps a name to a :class:`Check`; the exit status is 0 when every
check passes and 1 otherwise.  Input problems raise :class:`InputProblem`.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Tuple

from ..constructions import (
    ConstructionError, karoubi_envelope, open_subobjects, par_category, slice_display_transfer,
    slice_tangent_category, term_slice_unit_counit,
)
from ..display import (
    Check, check_fully_displayed, check_split_idempotents_closed, check_well_displayed,
    classify_all, classify_morphism, maximal_tangent_display_system,
)
from ..fincat import functor_orbit, validate_nat
from ..limits import InputError
from ..ringcat import (
    bundled_f2_algebras, check_pushout, check_T_preserves_pushout, commuting_cocones, dual_numbers,
    enumerate_homs, tensor_over,
)
from ..tangent import canonical_bundle, check_differential_bundle, check_negatives, check_tangent_axioms
from .presentation import Presentation

Result = Tuple[dict, Dict[str, Check]]


class InputProblem(Exception):
    pass


def _category(pres: Presentation):
    if not pres.has_category:
        raise InputProblem("the file has no category block")
    return pres.category


def _tangent(pres: Presentation):
    cat = _category(pres)
    try:
        return cat, pres.tangent_structure()
    except ValueError as exc:
        raise InputProblem(str(exc)) from None


def _checks_dict(checks) -> Dict[str, Check]:
    return {k: v if isinstance(v, Check) else Check(bool(v)) for k, v in checks.items()}


def _refuse_unless_tangent(cat, ts):
    """Structural commands assume a tangent category; report the failing axioms otherwise."""
    try:
        rep = check_tangent_axioms(cat, ts)
    except InputError as exc:
        raise InputProblem(str(exc)) from None
    if rep.ok:
        return None
    failed = [list(x) for x in rep.failed_equations()]
    return ({"refused": "the tangent structure fails the axioms", "failed_equations": failed},
            {"tangent_axioms": Check(False, {"failed_equations": failed})})


# ---------------------------------------------------------------------------


def run_validate(pres: Presentation, args) -> Result:
    result: dict = {}
    checks: Dict[str, Check] = {}
    if pres.has_category:
        cat = pres.category
        result["category"] = {"name": cat.name, "objects": len(cat.objects),
                              "morphisms": len(cat.morphisms), "valid": True}
        T = pres.functor
        if pres.tangent is None:
            result["tangent"] = "absent"
        elif "ts" in pres.built:
            result["tangent"] = "complete"
        elif "partial_ts" in pres.built:
            result["tangent"] = "incomplete: " + pres.built["ts_missing"]
        else:
            result["tangent"] = "functor only"
        if T is not None:
            orb = functor_orbit(T)
            result["functor"] = {"valid": True, "orbit": {"preperiod": orb.preperiod, "period": orb.period}}
        ts = pres.built.get("partial_ts")
        if ts is not None:
            nat = {}
            names = ["p", "z", "l", "c"] + (["n"] if ts.neg is not None else [])
            for k in names:
                rep = validate_nat(ts.nat(k))
                nat[k] = rep.as_dict()
                checks[f"natural_{k}"] = Check(rep.ok, None if rep.ok else rep.violations[0].as_dict())
            result["naturality"] = nat
            wit = {f"{m},{n}": {"apex": w.apex, "projections": list(w.projections)}
                   for (m, n), w in sorted(ts.tn.items())}
            result["tn_witnesses"] = wit
        result["systems"] = {s: list(ms) for s, ms in sorted(pres.systems.items())}
    algs = {}
    for a in pres.algebra_list():
        algs[a.name] = {"prime": a.prime, "dim": a.dim, "size": a.size, "valid": True}
    if algs:
        result["algebras"] = algs
    return result, checks


def run_tangent_check(pres: Presentation, args) -> Result:
    cat, ts = _tangent(pres)
    try:
        ax = check_tangent_axioms(cat, ts)
    except InputError as exc:
        raise InputProblem(str(exc)) from None
    result = {"axioms": ax.as_dict()}
    checks = {"tangent_axioms": Check(ax.ok, None if ax.ok else ax.failures[0])}
    if ts.neg is not None:
        neg = check_negatives(cat, ts)
        result["negatives"] = neg.as_dict()
        checks["negatives"] = Check(neg.ok, None if neg.ok else neg.failures[0])
    bundles = {}
    for m in cat.objects:
        rep = check_differential_bundle(cat, ts, canonical_bundle(ts, m))
        bundles[m] = rep.as_dict()
        checks[f"tangent_bundle_is_differential_bundle[{m}]"] = Check(rep.ok, None if rep.ok else rep.failures[0])
    result["tangent_bundles"] = bundles
    if ax.ok:
        result["well_displayed"] = check_well_displayed(cat, ts).as_dict()
    orb = functor_orbit(ts.T)
    result["orbit"] = {"preperiod": orb.preperiod, "period": orb.period}
    return result, checks


def run_classify(pres: Presentation, args) -> Result:
    cat, ts = _tangent(pres)
    refused = _refuse_unless_tangent(cat, ts)
    if refused:
        return refused
    if args.mor is not None:
        if args.mor not in cat.morphisms:
            raise InputProblem(f"unknown morphism {args.mor!r}")
        verdicts = {args.mor: classify_morphism(cat, ts, args.mor)}
    else:
        verdicts = classify_all(cat, ts)
    result = {"verdicts": {q: v.as_dict() for q, v in sorted(verdicts.items())}}
    counts = {}
    for flag in ("display", "t_display", "submersion", "etale", "t_monic"):
        counts[flag] = sum(v.flags()[flag] for v in verdicts.values())
    result["counts"] = counts
    bad_etale = sorted(q for q, v in verdicts.items() if v.is_etale and not v.is_submersion)
    bad_disp = sorted(q for q, v in verdicts.items() if v.is_t_display and not v.is_display)
    bad_monic = sorted(q for q, v in verdicts.items() if v.is_t_monic and v.is_submersion and not v.is_etale)
    checks = {
        "etale_implies_submersion": Check(not bad_etale, {"morphism": bad_etale[0]} if bad_etale else None),
        "t_display_implies_display": Check(not bad_disp, {"morphism": bad_disp[0]} if bad_disp else None),
        "t_monic_submersion_is_etale": Check(not bad_monic, {"morphism": bad_monic[0]} if bad_monic else None),
    }
    return result, checks


def run_maximal_system(pres: Presentation, args) -> Result:
    cat, ts = _tangent(pres)
    refused = _refuse_unless_tangent(cat, ts)
    if refused:
        return refused
    sv = maximal_tangent_display_system(cat, ts)
    split_closed = check_split_idempotents_closed(cat)
    well = check_well_displayed(cat, ts)
    fully = check_fully_displayed(cat, ts, budget=args.budget)
    result = {
        "system": sv.as_dict(),
        "split_idempotents_closed": split_closed.as_dict(),
        "well_displayed": well.as_dict(),
        "fully_displayed": fully.as_dict(),
        "negatives": ts.neg is not None,
    }
    checks = {
        "is_tangent_display_system": Check(sv.is_display_system, sv.counterexamples or None),
        "closed_under_composition": Check(sv.closed_under_composition,
                                          sv.counterexamples.get("closed_under_composition")),
        "split_closed_implies_retractive": Check(not split_closed.holds or sv.retractive,
                                                 sv.counterexamples.get("retractive")),
        "fully_displayed": fully,
    }
    return result, checks


def run_split(pres: Presentation, args) -> Result:
    cat, ts = _tangent(pres)
    refused = _refuse_unless_tangent(cat, ts)
    if refused:
        return refused
    out = karoubi_envelope(cat, ts)
    sc = out.split_cat
    checks = _checks_dict(out.checks)
    result = {
        "objects": list(sc.objects),
        "morphisms": len(sc.morphisms),
        "provenance": {k: list(v) for k, v in sorted(out.provenance.items()) if k in sc.objects},
        "embedding": {a: out.embedding.ob(a) for a in cat.objects},
        "checks": {k: v.as_dict() for k, v in sorted(checks.items())},
    }
    return result, checks


def run_slice(pres: Presentation, args) -> Result:
    cat, ts = _tangent(pres)
    if args.base not in cat.objects:
        raise InputProblem(f"unknown object {args.base!r}")
    refused = _refuse_unless_tangent(cat, ts)
    if refused:
        return refused
    out = slice_tangent_category(cat, ts, args.base)
    sc = out.slice_cat
    checks = _checks_dict(out.checks)
    transfer_cex: List[dict] = []
    tested = 0
    for h_id, (h, f, g) in sorted(out.under_mor.items()):
        if not classify_morphism(cat, ts, h).is_t_display:
            continue
        tested += 1
        c = slice_display_transfer(cat, ts, args.base, h, f, g, out=out)
        if not c.holds:
            transfer_cex.append({"morphism": h_id, "reason": c.counterexample})
    checks["display_transfer"] = Check(not transfer_cex, transfer_cex[0] if transfer_cex else None,
                                       {"tested": tested})
    result = {
        "base": args.base,
        "objects": {x: out.under_obj[x] for x in sc.objects},
        "morphisms": len(sc.morphisms),
        "terminal": out.terminal,
        "tangent_bundle": {x: sc.cod(out.slice_ts.z[x]) for x in sc.objects},
        "checks": {k: v.as_dict() for k, v in sorted(checks.items())},
    }
    try:
        ts_checks = term_slice_unit_counit(cat, ts, bases=[args.base])
    except ConstructionError as exc:
        result["term_slice"] = {"skipped": str(exc)}
    else:
        result["term_slice"] = {k: v.as_dict() for k, v in sorted(ts_checks.items())}
        checks.update({f"term_slice.{k}": v for k, v in ts_checks.items()})
    return result, checks


def _par_result(out) -> dict:
    pc = out.par_cat
    return {
        "morphisms": len(pc.morphisms),
        "spans": {x: list(out.span_reps[x]) for x in pc.morphisms},
        "restriction": {x: out.restriction[x] for x in pc.morphisms},
        "checks": {k: (v.as_dict() if isinstance(v, Check) else v) for k, v in sorted(out.checks.items())},
    }


def run_par(pres: Presentation, args) -> Result:
    cat, ts = _tangent(pres)
    try:
        members = pres.system(args.system)
    except KeyError as exc:
        raise InputProblem(exc.args[0]) from None
    refused = _refuse_unless_tangent(cat, ts)
    if refused:
        return refused
    try:
        out = par_category(cat, ts, members)
    except ConstructionError as exc:
        return {"system": args.system, "refused": str(exc)}, {"monic_system": Check(False, {"reason": str(exc)})}
    result = {"system": args.system, "members": sorted(members)}
    result.update(_par_result(out))
    return result, _checks_dict(out.checks)


def run_open(pres: Presentation, args) -> Result:
    cat, ts = _tangent(pres)
    refused = _refuse_unless_tangent(cat, ts)
    if refused:
        return refused
    op = open_subobjects(cat, ts)
    checks = _checks_dict(op.checks)
    result = {"poset": op.as_dict(), "checks": {k: v.as_dict() for k, v in sorted(checks.items())}}
    if op.par is not None:
        result["par"] = _par_result(op.par)
        checks.update({f"par.{k}": v for k, v in _checks_dict(op.par.checks).items()})
    return result, checks


def run_ring_demo(pres, args) -> Result:
    algebras = pres.algebra_list() if pres is not None else bundled_f2_algebras()
    if not algebras:
        raise InputProblem("the file has no algebra blocks")
    depth = args.depth
    spans = []
    failures = 0
    for M, N, E in itertools.product(algebras, repeat=3):
        if not (M.prime == N.prime == E.prime):
            continue
        for (i, f), (j, g) in itertools.product(enumerate(enumerate_homs(M, N)), enumerate(enumerate_homs(M, E))):
            po = tensor_over(M, N, E, f, g)
            cp = check_pushout(po, commuting_cocones(po, algebras))
            tp = check_T_preserves_pushout(po, depth)
            ok = cp["holds"] and tp["holds"]
            failures += not ok
            spans.append({
                "M": M.name, "N": N.name, "E": E.name, "f": i, "g": j,
                "dim": po.algebra.dim, "pushout": cp, "T_preserves": tp, "holds": ok,
            })
    dims = {a.name: {"dim": a.dim, "size": a.size, "dual_size": dual_numbers(a).size} for a in algebras}
    result = {"algebras": dims, "depth": depth, "spans": spans,
              "verified_to_depth": depth, "span_count": len(spans)}
    first_bad = next((s for s in spans if not s["holds"]), None)
    checks = {"pushouts_preserved": Check(failures == 0, first_bad and {
        k: first_bad[k] for k in ("M", "N", "E", "f", "g")}, {"spans": len(spans), "failures": failures})}
    return result, checks


COMMANDS = {
    "validate": run_validate,
    "tangent-check": run_tangent_check,
    "classify": run_classify,
    "maximal-system": run_maximal_system,
    "split": run_split,
    "slice": run_slice,
    "par": run_par,
    "open": run_open,
    "ring-demo": run_ring_demo,
}
