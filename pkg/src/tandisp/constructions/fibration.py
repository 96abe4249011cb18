"""Cartesian lifts for the codomain fibration of a tangent display system."""

from __future__ import annotations

from ..display import SystemVerdict
from ..fincat import FinCategory, MorId
from ..limits import Cospan, PullbackCertificate, compute_pullback, is_pullback_square, is_T_pullback
from ..tangent import TangentStructure
from .common import ConstructionError


def cartesian_lift(cat: FinCategory, ts: TangentStructure, system: SystemVerdict, f: MorId, q: MorId):
    """Canonical pullback of ``q`` along ``f``, plus a check that ``T`` maps it to a lift of ``Tf`` over ``Tq``.

    Returns ``(certificate, report)``; the report records whether every
    T-iterate of the lift is cartesian and whether the T-image coincides
    with the canonical lift of ``Tf`` over ``Tq`` on the nose.
    """
    if q not in system.members:
        raise ConstructionError(f"{q} is not in the system")
    if cat.cod(f) != cat.cod(q):
        raise ConstructionError(f"{f} and {q} do not share a codomain")
    cert = compute_pullback(cat, Cospan(f, q))
    if cert is None:
        raise ConstructionError(f"no pullback of {q} along {f}")
    image = cert.square.image(ts.T)
    canonical = compute_pullback(cat, Cospan(ts.T.mor(f), ts.T.mor(q)))
    report = {
        "T_image_cartesian": is_pullback_square(cat, image).holds,
        "all_iterates_cartesian": is_T_pullback(cat, ts.T, cert.square).holds,
        "T_image_is_canonical": canonical is not None and canonical.square == image,
    }
    return cert, report
