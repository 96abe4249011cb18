"""Acceptance criteria 1-10.  Each prints one PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` or through pytest,
which repeats the lines in an "acceptance criteria" summary section.
"""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import conftest  # noqa: E402
import oracle  # noqa: E402
from golden_cases import cases, expected, produce  # noqa: E402
from shapes import commuting_squares, rectangles, retract_configurations  # noqa: E402

from tandisp.catalog import EXAMPLES, load_example, tangent_examples  # noqa: E402
from tandisp.cli import PresentationError, parse, parse_text, serialize  # noqa: E402
from tandisp.constructions import (  # noqa: E402
    ConstructionError, karoubi_envelope, open_subobjects, slice_display_transfer,
    slice_tangent_category, term_slice_unit_counit,
)
from tandisp.data import bundled_files  # noqa: E402
from tandisp.display import (  # noqa: E402
    check_display_system, check_fully_displayed, check_retractive, check_split_idempotents_closed,
    check_well_displayed, classify_all, maximal_tangent_display_system,
)
from tandisp.fincat import is_cauchy_complete  # noqa: E402
from tandisp.limits import (  # noqa: E402
    Cospan, Square, compute_pullback, compute_terminal, is_pullback_square, is_T_pullback,
    is_weak_T_pullback,
)
from tandisp.ringcat import (  # noqa: E402
    bundled_f2_algebras, check_T_preserves_pushout, dual_numbers, enumerate_homs, f2, f2_dual,
    tensor_over,
)
from tandisp.tangent import canonical_bundle, check_differential_bundle  # noqa: E402

POSETS = ("diamond", "vposet", "empty")
DIAGNOSTIC_KINDS = {"syntax", "unknown-identifier", "duplicate", "non-composable", "typing",
                    "conflict", "missing", "law"}


def _examples(names=None):
    for name in names or tangent_examples():
        cat, ts = load_example(name)
        yield name, cat, ts


def _failing(checks):
    return sorted(k for k, v in checks.items() if not bool(v))


class _Memo:
    """Cache square verdicts so pasting sweeps stay linear in the number of squares."""

    def __init__(self, cat, T):
        self.cat, self.T, self.plain, self.tpb = cat, T, {}, {}

    def pb(self, sq):
        if sq not in self.plain:
            self.plain[sq] = is_pullback_square(self.cat, sq).holds
        return self.plain[sq]

    def tp(self, sq):
        if sq not in self.tpb:
            self.tpb[sq] = is_T_pullback(self.cat, self.T, sq).holds
        return self.tpb[sq]


# ---------------------------------------------------------------------------


def criterion_1():
    bad, n = [], 0
    for name in sorted(EXAMPLES):
        cat, ts = load_example(name)
        memo = _Memo(cat, ts.T)
        for left, right, outer in rectangles(cat):
            n += 1
            if memo.pb(right) and memo.pb(outer) and not memo.pb(left):
                bad.append((name, "plain", left))
            if memo.tp(right) and memo.tp(outer) and not memo.tp(left):
                bad.append((name, "T", left))
    return not bad and n > 0, f"{n} rectangles over {len(EXAMPLES)} examples, violations {bad[:2]}"


def criterion_2():
    bad = []
    for name, cat, ts in _examples():
        sv = maximal_tangent_display_system(cat, ts)
        expect = {q for q, v in classify_all(cat, ts).items() if v.is_t_display}
        if not (sv.is_display_system and sv.stable_under_T and sv.closed_under_composition
                and set(sv.members) == expect):
            bad.append((name, sv.counterexamples))
    return not bad, f"{len(tangent_examples())} examples, failures {bad[:1]}"


def criterion_3():
    bad = []
    split_closed = configs = squares = 0
    for name, cat, ts in _examples():
        if check_split_idempotents_closed(cat).holds:
            split_closed += 1
            members = maximal_tangent_display_system(cat, ts).members
            if not check_retractive(cat, ts, members).holds:
                bad.append((name, "retractive"))
        T = ts.T
        for sq in commuting_squares(cat):
            squares += 1
            weak = is_weak_T_pullback(cat, T, sq).holds
            strict = is_T_pullback(cat, T, sq).holds
            if weak or strict:
                for small in retract_configurations(cat, sq):
                    configs += 1
                    if weak and not is_weak_T_pullback(cat, T, small).holds:
                        bad.append((name, "weak retract", sq, small))
                    if strict and not is_T_pullback(cat, T, small).holds:
                        bad.append((name, "retract", sq, small))
            if is_T_pullback(cat, T, sq.image(T)).holds and not is_pullback_square(cat, sq).holds:
                bad.append((name, "T-image", sq))
    ok = not bad and configs > 0
    return ok, (f"{split_closed} split-closed examples, {squares} squares, "
                f"{configs} retract configurations, violations {bad[:2]}")


def criterion_4():
    bad = []
    for name, cat, ts in _examples(("monoid_e",) + POSETS):
        out = karoubi_envelope(cat, ts)
        failing = _failing(out.checks)
        if failing or not is_cauchy_complete(out.split_cat):
            bad.append((name, failing))
    return not bad, f"monoid_e and {len(POSETS)} posets, failures {bad}"


def criterion_5():
    bad, bases, transfers, cartesian = [], 0, 0, []
    for name, cat, ts in _examples():
        for base in cat.objects:
            bases += 1
            out = slice_tangent_category(cat, ts, base)
            if _failing(out.checks) or out.terminal != out.obj_of(cat.identity(base)):
                bad.append((name, base, _failing(out.checks)))
            verdicts = classify_all(cat, ts)
            display_into = [q for q in cat.morphisms if cat.cod(q) == base and verdicts[q].is_t_display]
            for f, g in itertools.product(display_into, repeat=2):
                for h in cat.hom(cat.dom(f), cat.dom(g)):
                    if cat.then(h, g) == f and verdicts[h].is_t_display:
                        transfers += 1
                        if not slice_display_transfer(cat, ts, base, h, f, g, out=out).holds:
                            bad.append((name, "transfer", h, f, g))
        star = compute_terminal(cat)
        is_cartesian = star is not None and all(
            classify_all(cat, ts)[cat.hom(m, star)[0]].is_t_display for m in cat.objects)
        try:
            checks = term_slice_unit_counit(cat, ts)
        except ConstructionError:
            if is_cartesian:
                bad.append((name, "term/slice refused"))
            continue
        cartesian.append(name)
        if _failing(checks):
            bad.append((name, "term/slice", _failing(checks)))
    return not bad and cartesian, (f"{bases} slices, {transfers} display transfers, "
                                   f"term/slice on {cartesian}, failures {bad[:2]}")


def _structural_squares(cat, ts, q):
    """Naturality squares of p, z, l, c and s at ``q``, as (name, square) pairs."""
    T = ts.T
    E, M = cat.dom(q), cat.cod(q)
    Tq, TTq = T.mor(q), T.mor(T.mor(q))
    out = [("p", Square(ts.p[E], ts.p[M], Tq, q)),
           ("z", Square(q, Tq, ts.z[E], ts.z[M])),
           ("l", Square(Tq, TTq, ts.l[E], ts.l[M])),
           ("c", Square(TTq, TTq, ts.c[E], ts.c[M]))]
    wE, wM = ts.t2(E), ts.t2(M)
    T2q = wM.mediate([cat.then(pr, Tq) for pr in wE.projections])
    out.append(("s", Square(T2q, Tq, ts.s[E], ts.s[M])))
    return out


def criterion_6():
    bad, systems, maps = [], 0, 0
    for name, cat, ts in _examples():
        v = classify_all(cat, ts)
        for label, pick in (("submersions", lambda x: x.is_submersion), ("etale", lambda x: x.is_etale)):
            fam = [q for q in cat.morphisms if v[q].is_t_display and pick(v[q])]
            sv = check_display_system(cat, ts, fam)
            systems += 1
            if not (sv.is_display_system and sv.retractive):
                bad.append((name, label, sv.counterexamples))
        for q in cat.morphisms:
            maps += 1
            if v[q].is_t_monic and v[q].is_submersion and not v[q].is_etale:
                bad.append((name, "monic submersion not etale", q))
            if v[q].is_etale:
                for comp, sq in _structural_squares(cat, ts, q):
                    if not is_T_pullback(cat, ts.T, sq).holds:
                        bad.append((name, f"{comp}-square", q))
    return not bad, f"{systems} candidate systems, {maps} morphisms, failures {bad[:2]}"


def criterion_7():
    bad, meets = [], 0
    for name, cat, ts in _examples():
        op = open_subobjects(cat, ts)
        failing = _failing(op.checks) + _failing(op.par.checks)
        if failing:
            bad.append((name, failing))
        if set(op.members) != oracle.open_scan(cat, ts):
            bad.append((name, "open scan differs"))
        for (m, n), meet in op.meets.items():
            if meet is None:
                continue
            meets += 1
            cert = compute_pullback(cat, Cospan(m, n))
            if cert is None or not is_pullback_square(cat, cert.square).holds:
                bad.append((name, "meet", m, n))
    return not bad, f"{len(tangent_examples())} examples, {meets} certified meets, failures {bad[:2]}"


_MULT_N = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
_MULT_TN = [[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]],
            [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]],
            [[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]]


def criterion_8():
    algs = [a for a in bundled_f2_algebras() if a.dim <= 2]
    bad, spans = [], 0
    for M, N, E in itertools.product(algs, repeat=3):
        for f in enumerate_homs(M, N):
            for g in enumerate_homs(M, E):
                spans += 1
                po = tensor_over(M, N, E, f, g)
                rep = check_T_preserves_pushout(po, depth=2)
                if not (rep["holds"] and rep["verified_to_depth"] == 2):
                    bad.append((M.name, N.name, E.name))
    M, N = f2(), f2_dual()
    f = enumerate_homs(M, N)[0]
    po = tensor_over(M, N, N, f, f)
    lvl = check_T_preserves_pushout(po, depth=1)["levels"][0]
    sizes = (po.algebra.size, 2 ** lvl["dim_T_of_pushout"], 2 ** lvl["dim_pushout_of_T"],
             dual_numbers(po.algebra).size)
    small = 2 ** oracle.gf2_pushout_dim(1, 2, 2, _MULT_N, _MULT_N, [[1, 0]], [[1, 0]])
    big = 2 ** oracle.gf2_pushout_dim(2, 4, 4, _MULT_TN, _MULT_TN, [[1, 0, 0, 0], [0, 0, 1, 0]],
                                      [[1, 0, 0, 0], [0, 0, 1, 0]])
    ok = not bad and spans > 0 and sizes == (small, big, big, big) and (small, big) == (16, 256)
    return ok, f"{spans} spans at depth 2, sizes {sizes} vs oracle {(small, big)}, failures {bad[:2]}"


def criterion_9():
    bad, bundles, full = [], 0, []
    for name, cat, ts in _examples():
        for m in cat.objects:
            bundles += 1
            if not check_differential_bundle(cat, ts, canonical_bundle(ts, m)).ok:
                bad.append((name, m))
        if ts.neg is None:
            continue
        members = maximal_tangent_display_system(cat, ts).members
        if check_retractive(cat, ts, members).holds and check_well_displayed(cat, ts).holds:
            chk = check_fully_displayed(cat, ts)
            full.append(name)
            if not chk.holds or chk.inconclusive:
                bad.append((name, "fully displayed", chk.label))
    return not bad and full, f"{bundles} tangent bundles, fully displayed on {full}, failures {bad[:2]}"


def criterion_10():
    bad = []
    good, malformed = bundled_files(), bundled_files(malformed=True)
    for path in good:
        text = path.read_text(encoding="utf-8")
        if serialize(parse(path)) != text or serialize(parse_text(text)) != text:
            bad.append(("round-trip", path.name))
    kinds = set()
    for path in malformed:
        try:
            parse(path)
            bad.append(("accepted", path.name))
        except PresentationError as exc:
            kinds |= {d.kind for d in exc.diagnostics}
    if kinds != DIAGNOSTIC_KINDS:
        bad.append(("kinds", sorted(DIAGNOSTIC_KINDS - kinds)))
    golden = cases()
    for name, argv in golden:
        if produce(argv) != expected(name):
            bad.append(("golden", name))
    ok = not bad and len(good) + len(malformed) >= 10
    return ok, (f"{len(good)} round-trip files, {len(malformed)} malformed files, "
                f"{len(golden)} golden reports, failures {bad[:2]}")


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 11)}


def _line(n, ok, detail):
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, detail = CRITERIA[n]()
    line = _line(n, bool(ok), detail)
    conftest.ACCEPTANCE[n] = (bool(ok), line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [(n, *CRITERIA[n]()) for n in sorted(CRITERIA)]
    for n, ok, detail in results:
        print(_line(n, bool(ok), detail))
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
