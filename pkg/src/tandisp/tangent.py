"""Tangent structures on finite categories and their axiom checker.

A :class:`TangentStructure` stores the endofunctor ``T`` and the components
of ``p, z, s, l, c`` (and optionally ``n``) as plain dictionaries keyed by
object.  ``s`` and ``n`` are typed against chosen ``T_2`` witnesses stored in
``tn``.  All equations are written in diagrammatic order, so ``z;p = id``
means "first z, then p".

:func:`check_tangent_axioms` evaluates every equation on every object and
names each one, so a wrong component shows up as a named failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .fincat import (
    FinCategory, Functor, MorId, NatTransformation, ObjId,
    identity_functor, validate_functor,
)
from .limits import (
    Cospan, InputError, PullbackCertificate, Square, WidePullback, compute_nfold_pullback,
    compute_pullback, is_T_limit, is_T_pullback, universality,
)

COMPONENTS = ("p", "z", "s", "l", "c")


@dataclass
class TangentStructure:
    T: Functor
    p: Dict[ObjId, MorId]
    z: Dict[ObjId, MorId]
    s: Dict[ObjId, MorId]
    l: Dict[ObjId, MorId]
    c: Dict[ObjId, MorId]
    neg: Optional[Dict[ObjId, MorId]] = None
    tn: Dict[Tuple[ObjId, int], WidePullback] = field(default_factory=dict)
    # derived verdicts; treat the structure as frozen once anything is cached
    cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def cat(self) -> FinCategory:
        return self.T.source

    def t2(self, m: ObjId) -> WidePullback:
        try:
            return self.tn[(m, 2)]
        except KeyError:
            raise InputError(f"missing T_2 witness for object {m!r} (n=2)") from None

    def component(self, name: str) -> Dict[ObjId, MorId]:
        return {"p": self.p, "z": self.z, "s": self.s, "l": self.l, "c": self.c, "n": self.neg}[name]

    def nat(self, name: str) -> NatTransformation:
        """Wrap ``p``, ``z``, ``l`` or ``c`` as a :class:`NatTransformation`."""
        ident = identity_functor(self.cat)
        TT = self.T.then(self.T)
        src, tgt = {"p": (self.T, ident), "z": (ident, self.T),
                    "l": (self.T, TT), "c": (TT, TT), "n": (self.T, self.T)}[name]
        return NatTransformation(src, tgt, dict(self.component(name)))


@dataclass
class DifferentialBundleData:
    """Bundle ``q: E -> M`` with zero, sum over ``e2`` and lift."""

    q: MorId
    z_q: MorId
    s_q: MorId
    l_q: MorId
    e2: PullbackCertificate


@dataclass
class AxiomReport:
    """Named equations grouped by axiom; ``failures`` lists every violated instance."""

    checked: Dict[str, Dict[str, int]] = field(default_factory=dict)
    failures: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def record(self, group: str, name: str, where, ok: bool, detail: str = ""):
        g = self.checked.setdefault(group, {})
        g[name] = g.get(name, 0) + 1
        if not ok:
            self.failures.append({"group": group, "equation": name, "at": where, "detail": detail})

    def group_ok(self, group: str) -> bool:
        return all(f["group"] != group for f in self.failures)

    def failed_equations(self):
        return sorted({(f["group"], f["equation"]) for f in self.failures})

    def as_dict(self):
        groups = {}
        for g, eqs in sorted(self.checked.items()):
            groups[g] = {
                name: {"instances": n,
                       "ok": not any(f["group"] == g and f["equation"] == name for f in self.failures)}
                for name, n in sorted(eqs.items())
            }
        return {"ok": self.ok, "groups": groups,
                "failures": sorted(self.failures, key=lambda f: (f["group"], f["equation"], str(f["at"])))}


class _Undefined(Exception):
    pass


class _Eval:
    """Composite and pairing helpers that raise ``_Undefined`` on ill-typed terms."""

    def __init__(self, cat: FinCategory, T: Functor):
        self.cat, self.T = cat, T

    def seq(self, *fs):
        out = fs[0]
        for g in fs[1:]:
            if self.cat.cod(out) != self.cat.dom(g):
                raise _Undefined(f"{out};{g} is not composable")
            try:
                out = self.cat.then(out, g)
            except KeyError:
                raise _Undefined(f"then({out},{g}) missing") from None
        return out

    def Tm(self, f, k=1):
        for _ in range(k):
            f = self.T.mor(f)
        return f

    def To(self, a, k=1):
        for _ in range(k):
            a = self.T.ob(a)
        return a

    def pair(self, maps, apex, projections, cone):
        """Factor ``cone`` through the limit ``(apex, projections)`` over ``maps``."""
        cat = self.cat
        maps, projections, cone = tuple(maps), tuple(projections), tuple(cone)
        ok, med, _ = universality(cat, maps, apex, projections)
        if not ok:
            raise _Undefined(f"{projections} at {apex} is not a limit of {maps}")
        try:
            return med[cone]
        except KeyError:
            raise _Undefined(f"{cone} is not a cone over {maps}") from None

    def pair_w(self, w: WidePullback, cone):
        return self.pair(w.maps, w.apex, w.projections, cone)

    def pair_Tw(self, w: WidePullback, cone):
        """Pair into the T-image of a witness."""
        return self.pair([self.Tm(q) for q in w.maps], self.To(w.apex),
                         [self.Tm(x) for x in w.projections], cone)


def _eq(report, group, name, where, thunk):
    try:
        lhs, rhs = thunk()
    except _Undefined as exc:
        report.record(group, name, where, False, f"undefined: {exc}")
        return
    except KeyError as exc:
        report.record(group, name, where, False, f"missing data {exc}")
        return
    report.record(group, name, where, lhs == rhs, "" if lhs == rhs else f"{lhs} != {rhs}")


def _typed(cat, f, a, b):
    return f in cat.morphisms and cat.dom(f) == a and cat.cod(f) == b


def _check_typing(cat, ts, ev, report) -> bool:
    ok = True
    for m in cat.objects:
        TM, TTM = ev.To(m), ev.To(m, 2)
        w = ts.t2(m)
        if not (w.maps == (ts.p.get(m), ts.p.get(m))):
            report.record("0", "T2 witness lies over p", m, False, f"maps {w.maps}")
            ok = False
        expected = {"p": (TM, m), "z": (m, TM), "s": (w.apex, TM), "l": (TM, TTM), "c": (TTM, TTM)}
        if ts.neg is not None:
            expected["n"] = (TM, TM)
        for name, (a, b) in expected.items():
            f = ts.component(name).get(m)
            good = f is not None and _typed(cat, f, a, b)
            report.record("0", f"{name} typed", m, good, "" if good else f"{name}_{m}={f} expected {a}->{b}")
            ok = ok and good
    return ok


def _naturality(cat, ts, ev, report, names):
    for f in cat.morphisms:
        a, b = cat.dom(f), cat.cod(f)
        if "p" in names:
            _eq(report, "0", "p natural", f, lambda: (ev.seq(ev.Tm(f), ts.p[b]), ev.seq(ts.p[a], f)))
        if "z" in names:
            _eq(report, "0", "z natural", f, lambda: (ev.seq(f, ts.z[b]), ev.seq(ts.z[a], ev.Tm(f))))
        if "l" in names:
            _eq(report, "0", "l natural", f,
                lambda: (ev.seq(ev.Tm(f), ts.l[b]), ev.seq(ts.l[a], ev.Tm(f, 2))))
        if "c" in names:
            _eq(report, "0", "c natural", f,
                lambda: (ev.seq(ev.Tm(f, 2), ts.c[b]), ev.seq(ts.c[a], ev.Tm(f, 2))))
        if "n" in names:
            _eq(report, "negatives", "n natural", f,
                lambda: (ev.seq(ev.Tm(f), ts.neg[b]), ev.seq(ts.neg[a], ev.Tm(f))))
        if "s" in names:
            def s_nat():
                wa, wb = ts.t2(a), ts.t2(b)
                T2f = ev.pair_w(wb, [ev.seq(pr, ev.Tm(f)) for pr in wa.projections])
                return ev.seq(T2f, ts.s[b]), ev.seq(ts.s[a], ev.Tm(f))
            _eq(report, "0", "s natural", f, s_nat)


def _additive_bundle(report, group, ev, q, zq, sq, w: WidePullback, w3: Optional[WidePullback], base_id):
    """Commutative-monoid equations for ``(q, zq, sq)`` over witness ``w``."""
    pi1, pi2 = w.projections
    e = ev.cat.dom(q)
    ide = ev.cat.identity(e)
    _eq(report, group, "z;p = id", e, lambda: (ev.seq(zq, q), base_id))
    _eq(report, group, "s;p = pi1;p", e, lambda: (ev.seq(sq, q), ev.seq(pi1, q)))
    _eq(report, group, "unit <id, p;z>;s = id", e,
        lambda: (ev.seq(ev.pair_w(w, [ide, ev.seq(q, zq)]), sq), ide))
    _eq(report, group, "commutativity <pi2,pi1>;s = s", e,
        lambda: (ev.seq(ev.pair_w(w, [pi2, pi1]), sq), sq))

    def assoc():
        if w3 is None:
            raise _Undefined("no triple pullback")
        r1, r2, r3 = w3.projections
        left = ev.seq(ev.pair_w(w, [ev.seq(ev.pair_w(w, [r1, r2]), sq), r3]), sq)
        right = ev.seq(ev.pair_w(w, [r1, ev.seq(ev.pair_w(w, [r2, r3]), sq)]), sq)
        return left, right

    _eq(report, group, "associativity", e, assoc)


def vertical_lift_square(cat, ts, m, ev=None) -> Square:
    """Square with top ``v = <pi1;l, pi2;z_T>;T(s)``, right ``Tp``, left ``pi1;p``, bottom ``z``."""
    ev = ev or _Eval(cat, ts.T)
    w = ts.t2(m)
    pi1, pi2 = w.projections
    v = ev.seq(ev.pair_Tw(w, [ev.seq(pi1, ts.l[m]), ev.seq(pi2, ts.z[ev.To(m)])]), ev.Tm(ts.s[m]))
    return Square(v, ts.z[m], ev.seq(pi1, ts.p[m]), ev.Tm(ts.p[m]))


def check_tangent_axioms(cat: FinCategory, ts: TangentStructure) -> AxiomReport:
    """Evaluate every tangent-category equation on every object.

    Groups: ``0`` typing and naturality, ``i`` additive bundle, ``ii`` T_n
    witnesses are T-limits, ``iii`` bundle morphisms (l, z) and (c, id),
    ``iv`` involution and symmetry of the lift, ``v`` lift coherence,
    ``vi`` universality of the vertical lift, ``vii`` flip coherences.
    """
    report = AxiomReport()
    for m in cat.objects:
        ts.t2(m)  # raises naming the object when absent
    fr = validate_functor(ts.T)
    for v in fr.violations:
        report.record("0", "T functor", list(v.cells), False, v.message)
    if not fr.ok:
        return report
    ev = _Eval(cat, ts.T)
    if not _check_typing(cat, ts, ev, report):
        return report
    _naturality(cat, ts, ev, report, ("p", "z", "s", "l", "c"))

    for m in cat.objects:
        w = ts.t2(m)
        pi1, pi2 = w.projections
        TM = ev.To(m)
        p, z, s, l, c = ts.p[m], ts.z[m], ts.s[m], ts.l[m], ts.c[m]
        w3 = ts.tn.get((m, 3)) or compute_nfold_pullback(cat, p, 3)
        _additive_bundle(report, "i", ev, p, z, s, w, w3, cat.identity(m))

        # (ii) every witness is a T-pullback
        for (obj, n), wn in sorted(ts.tn.items()):
            if obj != m:
                continue
            ok = bool(is_T_limit(cat, ts.T, wn.maps, wn.apex, wn.projections))
            report.record("ii", f"T_{n} witness is a T-limit", m, ok)

        # (iii) (l, z) and (c, id) are additive bundle morphisms
        _eq(report, "iii", "l;Tp = p;z", m, lambda: (ev.seq(l, ev.Tm(p)), ev.seq(p, z)))
        _eq(report, "iii", "z;l = z;Tz", m, lambda: (ev.seq(z, l), ev.seq(z, ev.Tm(z))))
        _eq(report, "iii", "s;l = <pi1;l, pi2;l>;Ts", m,
            lambda: (ev.seq(s, l), ev.seq(ev.pair_Tw(w, [ev.seq(pi1, l), ev.seq(pi2, l)]), ev.Tm(s))))
        _eq(report, "iii", "c;p_T = Tp", m, lambda: (ev.seq(c, ts.p[TM]), ev.Tm(p)))
        _eq(report, "iii", "Tz;c = z_T", m, lambda: (ev.seq(ev.Tm(z), c), ts.z[TM]))

        def ts_c():
            wt = ts.t2(TM)
            Tpi1, Tpi2 = ev.Tm(pi1), ev.Tm(pi2)
            rhs = ev.seq(ev.pair_w(wt, [ev.seq(Tpi1, c), ev.seq(Tpi2, c)]), ts.s[TM])
            return ev.seq(ev.Tm(s), c), rhs

        _eq(report, "iii", "Ts;c = <Tpi1;c, Tpi2;c>;s_T", m, ts_c)

        # (iv)
        _eq(report, "iv", "c;c = id", m, lambda: (ev.seq(c, c), cat.identity(ev.To(m, 2))))
        _eq(report, "iv", "l;c = l", m, lambda: (ev.seq(l, c), l))
        # (v)
        _eq(report, "v", "l;Tl = l;l_T", m, lambda: (ev.seq(l, ev.Tm(l)), ev.seq(l, ts.l[TM])))

        # (vi)
        try:
            sq = vertical_lift_square(cat, ts, m, ev)
            if ev.seq(sq.top, sq.rightv) != ev.seq(sq.leftv, sq.bottom):
                report.record("vi", "vertical lift square is a T-pullback", m, False, "square does not commute")
            else:
                verdict = is_T_pullback(cat, ts.T, sq)
                report.record("vi", "vertical lift square is a T-pullback", m, verdict.holds,
                              "" if verdict.holds else f"fails at k={verdict.failing_k}")
        except _Undefined as exc:
            report.record("vi", "vertical lift square is a T-pullback", m, False, f"undefined: {exc}")

        # (vii)
        _eq(report, "vii", "c_T;Tc;c_T = Tc;c_T;Tc", m,
            lambda: (ev.seq(ts.c[TM], ev.Tm(c), ts.c[TM]), ev.seq(ev.Tm(c), ts.c[TM], ev.Tm(c))))
        _eq(report, "vii", "l_T;Tc;c_T = c;Tl", m,
            lambda: (ev.seq(ts.l[TM], ev.Tm(c), ts.c[TM]), ev.seq(c, ev.Tm(l))))
    return report


def check_negatives(cat: FinCategory, ts: TangentStructure) -> AxiomReport:
    """Naturality of ``n`` plus ``n;p = p`` and ``<id, n>;s = p;z``."""
    if ts.neg is None:
        raise InputError("tangent structure has no negation")
    report = AxiomReport()
    ev = _Eval(cat, ts.T)
    for m in cat.objects:
        n = ts.neg.get(m)
        TM = ev.To(m)
        good = n is not None and _typed(cat, n, TM, TM)
        report.record("negatives", "n typed", m, good)
        if not good:
            return report
    _naturality(cat, ts, ev, report, ("n",))
    for m in cat.objects:
        n, p, z, s = ts.neg[m], ts.p[m], ts.z[m], ts.s[m]
        w = ts.t2(m)
        _eq(report, "negatives", "n;p = p", m, lambda: (ev.seq(n, p), p))
        _eq(report, "negatives", "<id, n>;s = p;z", m,
            lambda: (ev.seq(ev.pair_w(w, [cat.identity(ev.To(m)), n]), s), ev.seq(p, z)))
    return report


def trivial_tangent(cat: FinCategory, negatives: bool = True) -> TangentStructure:
    """Identity functor with identity components; ``T_2 M = M``."""
    T = identity_functor(cat)
    ids = {m: cat.identity(m) for m in cat.objects}
    tn = {}
    for m in cat.objects:
        i = ids[m]
        tn[(m, 2)] = WidePullback((i, i), m, (i, i),
                                  {(u, u): u for x in cat.objects for u in cat.hom(x, m)})
    return TangentStructure(T, dict(ids), dict(ids), dict(ids), dict(ids), dict(ids),
                            neg=dict(ids) if negatives else None, tn=tn)


def auto_witnesses(cat: FinCategory, T: Functor, p: Mapping[ObjId, MorId], n: int = 2):
    """Canonical ``T_n`` witnesses over ``p``; objects lacking one are omitted."""
    out = {}
    for m in cat.objects:
        if m in p:
            w = compute_nfold_pullback(cat, p[m], n)
            if w is not None:
                out[(m, n)] = w
    return out


def canonical_bundle(ts: TangentStructure, m: ObjId) -> DifferentialBundleData:
    """The tangent bundle ``p_M`` viewed as a differential bundle."""
    w = ts.t2(m)
    sq = Square(w.projections[1], w.maps[0], w.projections[0], w.maps[1])
    return DifferentialBundleData(ts.p[m], ts.z[m], ts.s[m], ts.l[m], PullbackCertificate(sq, w.mediators))


def check_differential_bundle(cat: FinCategory, ts: TangentStructure,
                              db: DifferentialBundleData) -> AxiomReport:
    """Additive bundle, the two lift conditions, universality of the lift and compatibility."""
    if db.e2 is None:
        raise InputError("differential bundle needs a certified E_2 pullback")
    report = AxiomReport()
    ev = _Eval(cat, ts.T)
    q, zq, sq_, lq = db.q, db.z_q, db.s_q, db.l_q
    sqr = db.e2.square
    if (sqr.bottom, sqr.rightv) != (q, q):
        raise InputError("E_2 certificate is not a pullback of q along q")
    e, m = cat.dom(q), cat.cod(q)
    TE = ev.To(e)
    w = WidePullback((q, q), cat.dom(sqr.top), (sqr.leftv, sqr.top), db.e2.mediators)
    ok, _, _ = universality(cat, w.maps, w.apex, w.projections)
    if not ok:
        raise InputError("E_2 certificate is not universal")
    pi1, pi2 = w.projections
    typing = [(zq, m, e), (sq_, w.apex, e), (lq, e, TE)]
    for f, a, b in typing:
        good = _typed(cat, f, a, b)
        report.record("typing", "component typed", f, good, "" if good else f"expected {a}->{b}")
    if not report.ok:
        return report

    _additive_bundle(report, "additive", ev, q, zq, sq_, w, compute_nfold_pullback(cat, q, 3),
                     cat.identity(m))

    zM, zE = ts.z[m], ts.z[e]
    _eq(report, "condition 1", "l_q;Tq = q;z", e, lambda: (ev.seq(lq, ev.Tm(q)), ev.seq(q, zM)))
    _eq(report, "condition 1", "z_q;l_q = z;Tz_q", e, lambda: (ev.seq(zq, lq), ev.seq(zM, ev.Tm(zq))))
    _eq(report, "condition 1", "s_q;l_q = <pi1;l_q, pi2;l_q>;Ts_q", e,
        lambda: (ev.seq(sq_, lq), ev.seq(ev.pair_Tw(w, [ev.seq(pi1, lq), ev.seq(pi2, lq)]), ev.Tm(sq_))))

    _eq(report, "condition 2", "l_q;p = q;z_q", e, lambda: (ev.seq(lq, ts.p[e]), ev.seq(q, zq)))
    _eq(report, "condition 2", "z_q;l_q = z_q;z", e, lambda: (ev.seq(zq, lq), ev.seq(zq, zE)))
    _eq(report, "condition 2", "s_q;l_q = <pi1;l_q, pi2;l_q>;s", e,
        lambda: (ev.seq(sq_, lq), ev.seq(ev.pair_w(ts.t2(e), [ev.seq(pi1, lq), ev.seq(pi2, lq)]), ts.s[e])))

    name3 = "lift square is a T-pullback"
    try:
        iota = ev.seq(ev.pair_Tw(w, [ev.seq(pi1, lq), ev.seq(pi2, zE)]), ev.Tm(sq_))
        square = Square(iota, zM, ev.seq(pi1, q), ev.Tm(q))
        if ev.seq(square.top, square.rightv) != ev.seq(square.leftv, square.bottom):
            report.record("condition 3", name3, e, False, "square does not commute")
        else:
            v = is_T_pullback(cat, ts.T, square)
            report.record("condition 3", name3, e, v.holds, "" if v.holds else f"fails at k={v.failing_k}")
    except _Undefined as exc:
        report.record("condition 3", name3, e, False, f"undefined: {exc}")

    _eq(report, "condition 4", "l_q;l = l_q;Tl_q", e, lambda: (ev.seq(lq, ts.l[e]), ev.seq(lq, ev.Tm(lq))))
    return report


def compute_vertical_bundle(cat: FinCategory, ts: TangentStructure, q: MorId):
    """Pullback of ``Tq`` along the zero of ``cod q``: ``(apex, certificate)`` or ``None``."""
    cert = compute_pullback(cat, Cospan(ts.z[cat.cod(q)], ts.T.mor(q)))
    if cert is None:
        return None
    return cat.dom(cert.square.top), cert
