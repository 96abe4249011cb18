"""Pullbacks, weak pullbacks, terminal objects and T-pullbacks.

Everything is decided by exhaustive cone enumeration.  A candidate
``(P, legs)`` over maps ``q_1 .. q_n`` into a common base is universal when,
for every object ``X``, the map ``hom(X, P) -> Cones(X)`` sending ``m`` to
``(m;leg_1, ..., m;leg_n)`` is a bijection.

Square convention: ``Square(top, bottom, leftv, rightv)`` with apex
``dom(top) = dom(leftv)`` and ``top;rightv = leftv;bottom``.  It is the
pullback of ``rightv`` along ``bottom``, i.e. of the cospan
``Cospan(left=bottom, right=rightv)``; its cones are pairs ``(u, v)`` with
``u`` into ``dom(bottom)`` and ``v`` into ``dom(rightv)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .fincat import FinCategory, Functor, MorId, ObjId, functor_orbit, iterate_functor


class InputError(ValueError):
    """A precondition of a decision procedure was violated by the caller."""


@dataclass(frozen=True)
class Cospan:
    left: MorId
    right: MorId


@dataclass(frozen=True)
class Square:
    top: MorId
    bottom: MorId
    leftv: MorId
    rightv: MorId

    @property
    def cospan(self) -> Cospan:
        return Cospan(self.bottom, self.rightv)

    @property
    def legs(self) -> Tuple[MorId, MorId]:
        return (self.leftv, self.top)

    def image(self, F: Functor) -> "Square":
        m = F.mor_map
        return Square(m[self.top], m[self.bottom], m[self.leftv], m[self.rightv])

    def as_dict(self):
        return {"top": self.top, "bottom": self.bottom, "left": self.leftv, "right": self.rightv}


@dataclass(frozen=True)
class WidePullback:
    """A certified limit of ``maps`` (all into one base object).

    ``mediators`` maps each cone, a tuple of legs, to its unique factorisation.
    """

    maps: Tuple[MorId, ...]
    apex: ObjId
    projections: Tuple[MorId, ...]
    mediators: Dict[Tuple[MorId, ...], MorId] = field(compare=False, repr=False)

    def mediate(self, cone: Sequence[MorId]) -> MorId:
        try:
            return self.mediators[tuple(cone)]
        except KeyError:
            raise InputError(f"{tuple(cone)} is not a cone over {self.maps}") from None


@dataclass(frozen=True)
class PullbackCertificate:
    square: Square
    mediators: Dict[Tuple[MorId, MorId], MorId] = field(compare=False, repr=False)

    def as_wide(self, cat: FinCategory) -> WidePullback:
        sq = self.square
        return WidePullback((sq.bottom, sq.rightv), cat.dom(sq.top), (sq.leftv, sq.top), self.mediators)

    def as_dict(self, include_mediators=False):
        out = {"square": self.square.as_dict()}
        if include_mediators:
            out["mediators"] = [
                {"cone": list(k), "mediator": v} for k, v in sorted(self.mediators.items())
            ]
        return out


@dataclass(frozen=True)
class TPullbackCertificate:
    base: PullbackCertificate
    iterate_certs: Tuple[PullbackCertificate, ...]


@dataclass
class Verdict:
    """Outcome of a decision with either a certificate or a counterexample."""

    holds: bool
    certificate: object = None
    counterexample: Optional[dict] = None
    failing_k: Optional[int] = None

    def __bool__(self):
        return self.holds

    def as_dict(self):
        out = {"holds": self.holds}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.failing_k is not None:
            out["failing_k"] = self.failing_k
        return out


# ---------------------------------------------------------------------------
# cone enumeration


def cones_at(cat: FinCategory, maps: Tuple[MorId, ...], x: ObjId) -> List[Tuple[MorId, ...]]:
    """All tuples ``(u_1..u_n)`` from ``x`` with every ``u_i;q_i`` equal."""
    key = ("cones", maps, x)

    def compute():
        groups = []
        for q in maps:
            g: Dict[MorId, List[MorId]] = {}
            for u in cat.hom(x, cat.dom(q)):
                g.setdefault(cat.then(u, q), []).append(u)
            groups.append(g)
        out = []
        common = set(groups[0])
        for g in groups[1:]:
            common &= set(g)
        for h in sorted(common):
            out.extend(itertools.product(*(g[h] for g in groups)))
        return out

    return cat.memo(key, compute)


def _check_cospan(cat: FinCategory, maps):
    base = {cat.cod(q) for q in maps}
    if len(base) != 1:
        raise InputError(f"maps {maps} do not share a codomain")


def universality(cat: FinCategory, maps: Tuple[MorId, ...], apex: ObjId,
                 projections: Tuple[MorId, ...], weak: bool = False):
    """Return ``(ok, mediators, counterexample)`` for a candidate limit cone.

    ``mediators`` is only meaningful when ``ok`` holds and ``weak`` is false;
    under ``weak`` only existence of factorisations is demanded.
    """
    key = ("univ", maps, apex, projections, weak)

    def compute():
        mediators: Dict[Tuple[MorId, ...], MorId] = {}
        for x in cat.objects:
            found: Dict[Tuple[MorId, ...], List[MorId]] = {}
            for m in cat.hom(x, apex):
                found.setdefault(tuple(cat.then(m, pr) for pr in projections), []).append(m)
            for cone in cones_at(cat, maps, x):
                ms = found.get(cone, [])
                if not ms or (len(ms) > 1 and not weak):
                    return False, None, {"object": x, "cone": list(cone), "mediators": sorted(ms)}
                mediators[cone] = ms[0]
        return True, mediators, None

    return cat.memo(key, compute)


def _is_cone(cat, maps, apex, projections):
    if len(projections) != len(maps):
        return False
    for pr, q in zip(projections, maps):
        if cat.dom(pr) != apex or cat.cod(pr) != cat.dom(q):
            return False
    return len({cat.then(pr, q) for pr, q in zip(projections, maps)}) == 1


def compute_wide_pullback(cat: FinCategory, maps: Sequence[MorId]) -> Optional[WidePullback]:
    """Canonical limit of ``maps``: least apex, then least projection tuple."""
    maps = tuple(maps)
    _check_cospan(cat, maps)

    def compute():
        for apex in cat.objects:
            for cone in sorted(cones_at(cat, maps, apex)):
                ok, med, _ = universality(cat, maps, apex, cone)
                if ok:
                    return WidePullback(maps, apex, cone, med)
        return None

    return cat.memo(("widepb", maps), compute)


def compute_pullback(cat: FinCategory, cospan: Cospan) -> Optional[PullbackCertificate]:
    """Canonical pullback of ``cospan.right`` along ``cospan.left``, or ``None``."""
    w = compute_wide_pullback(cat, (cospan.left, cospan.right))
    if w is None:
        return None
    return PullbackCertificate(Square(w.projections[1], cospan.left, w.projections[0], cospan.right),
                               w.mediators)


def all_pullbacks(cat: FinCategory, cospan: Cospan) -> List[PullbackCertificate]:
    """Every pullback cone over the cospan, in canonical order."""
    maps = (cospan.left, cospan.right)
    _check_cospan(cat, maps)
    out = []
    for apex in cat.objects:
        for u, v in sorted(cones_at(cat, maps, apex)):
            ok, med, _ = universality(cat, maps, apex, (u, v))
            if ok:
                out.append(PullbackCertificate(Square(v, cospan.left, u, cospan.right), med))
    return out


def _require_commutes(cat: FinCategory, sq: Square):
    try:
        typed = (cat.dom(sq.top) == cat.dom(sq.leftv) and cat.cod(sq.top) == cat.dom(sq.rightv)
                 and cat.cod(sq.leftv) == cat.dom(sq.bottom) and cat.cod(sq.bottom) == cat.cod(sq.rightv))
    except KeyError as exc:
        raise InputError(f"unknown morphism {exc}") from None
    if not typed:
        raise InputError(f"square {sq} is ill-typed")
    if cat.then(sq.top, sq.rightv) != cat.then(sq.leftv, sq.bottom):
        raise InputError(f"square {sq} does not commute")


def is_pullback_square(cat: FinCategory, square: Square) -> Verdict:
    _require_commutes(cat, square)
    ok, med, cex = universality(cat, (square.bottom, square.rightv), cat.dom(square.top), square.legs)
    if ok:
        return Verdict(True, PullbackCertificate(square, med))
    return Verdict(False, counterexample=cex)


def is_weak_pullback_square(cat: FinCategory, square: Square) -> Verdict:
    _require_commutes(cat, square)
    ok, _, cex = universality(cat, (square.bottom, square.rightv), cat.dom(square.top),
                              square.legs, weak=True)
    return Verdict(ok, counterexample=cex)


def _t_check(cat, T, square, weak, ks=None):
    _require_commutes(cat, square)
    if ks is None:
        ks = range(functor_orbit(T).bound)
    certs = []
    for k in ks:
        sq = square.image(iterate_functor(T, k))
        ok, med, cex = universality(cat, (sq.bottom, sq.rightv), cat.dom(sq.top), sq.legs, weak=weak)
        if not ok:
            return Verdict(False, counterexample=dict(cex, square=sq.as_dict()), failing_k=k)
        certs.append(PullbackCertificate(sq, med or {}))
    return Verdict(True, TPullbackCertificate(certs[0], tuple(certs[1:])))


def is_T_pullback(cat: FinCategory, T: Functor, square: Square) -> Verdict:
    """Is the square a pullback under every iterate ``T^k`` (``k`` over one orbit)?"""
    return _t_check(cat, T, square, weak=False)


def is_weak_T_pullback(cat: FinCategory, T: Functor, square: Square) -> Verdict:
    return _t_check(cat, T, square, weak=True)


def is_T_pullback_positive(cat: FinCategory, T: Functor, square: Square) -> Verdict:
    """Same test using only the iterates ``T^k`` with ``k >= 1``.

    ``k`` runs over ``1 .. pre+per``, which meets every iterate that occurs
    for positive exponents.  Used to cross-check the main path.
    """
    return _t_check(cat, T, square, weak=False, ks=range(1, functor_orbit(T).bound + 1))


def is_T_limit(cat: FinCategory, T: Functor, maps: Sequence[MorId], apex: ObjId,
               projections: Sequence[MorId]) -> Verdict:
    """Wide version of :func:`is_T_pullback` for ``T_n`` witnesses."""
    maps, projections = tuple(maps), tuple(projections)
    if not _is_cone(cat, maps, apex, projections):
        raise InputError(f"{projections} is not a cone over {maps}")
    for k in range(functor_orbit(T).bound):
        F = iterate_functor(T, k)
        m = tuple(F.mor(q) for q in maps)
        pr = tuple(F.mor(x) for x in projections)
        ok, _, cex = universality(cat, m, F.ob(apex), pr)
        if not ok:
            return Verdict(False, counterexample=cex, failing_k=k)
    return Verdict(True)


def mediating_morphism(cert: PullbackCertificate, cone: Tuple[MorId, MorId]) -> MorId:
    try:
        return cert.mediators[tuple(cone)]
    except KeyError:
        raise InputError(f"{tuple(cone)} is not a cone over the certified cospan") from None


def compute_terminal(cat: FinCategory) -> Optional[ObjId]:
    for t in cat.objects:
        if all(len(cat.hom(x, t)) == 1 for x in cat.objects):
            return t
    return None


def compute_nfold_pullback(cat: FinCategory, p: MorId, n: int) -> Optional[WidePullback]:
    """Limit of ``n`` copies of ``p``; ``n = 1`` gives ``dom p`` with the identity."""
    if n < 1:
        raise InputError("n must be at least 1")
    if n == 1:
        a = cat.dom(p)
        return WidePullback((p,), a, (cat.identity(a),),
                            {(u,): u for x in cat.objects for u in cat.hom(x, a)})
    return compute_wide_pullback(cat, (p,) * n)


def pair_into(cat: FinCategory, maps: Sequence[MorId], apex: ObjId,
              projections: Sequence[MorId], cone: Sequence[MorId]) -> Optional[MorId]:
    """Unique factorisation of ``cone`` through a limit cone, if it is universal."""
    maps, projections, cone = tuple(maps), tuple(projections), tuple(cone)
    ok, med, _ = universality(cat, maps, apex, projections)
    if not ok:
        return None
    return med.get(cone)
