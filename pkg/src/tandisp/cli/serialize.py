"""Canonical text for presentations, and presentations of in-memory data."""

from __future__ import annotations

from typing import Dict, Iterable, Optional

import numpy as np

from ..fincat import FinCategory
from ..ringcat import FiniteAlgebra
from ..tangent import TangentStructure
from .presentation import COMPONENT_NAMES, AlgebraBlock, Presentation, TangentBlock


def serialize(pres: Presentation) -> str:
    """Text that :func:`parse_text` maps back to an equal presentation."""
    out = []
    if pres.name is not None:
        out.append(f"category {pres.name}")
        if pres.objects:
            out.append("object " + " ".join(pres.objects))
        for a, e in pres.identities.items():
            out.append(f"identity {a} = {e}")
        for f, (a, b) in pres.arrows.items():
            out.append(f"mor {f} : {a} -> {b}")
        for (f, g), h in pres.composition.items():
            out.append(f"then({f}, {g}) = {h}")
        if pres.tangent is not None:
            out.extend(_tangent_lines(pres.tangent))
        for s, members in pres.systems.items():
            out.append(f"system {s} :" + "".join(" " + m for m in members))
    for alg in pres.algebras.values():
        if out:
            out.append("")
        out.append(f"algebra {alg.name}")
        out.append(f"  prime {alg.prime}")
        out.append("  basis " + " ".join(alg.basis))
        out.append("  unit " + " ".join(map(str, alg.unit)))
        for (i, j, k), c in alg.mult.items():
            out.append(f"  mult {i} {j} {k} {c}")
        out.append("end")
    return "\n".join(out) + "\n"


def _tangent_lines(tblock: TangentBlock):
    if tblock.trivial:
        return ["tangent trivial"]
    lines = ["tangent"]
    lines += [f"  T obj {a} -> {b}" for a, b in tblock.T_obj.items()]
    lines += [f"  T mor {f} -> {g}" for f, g in tblock.T_mor.items()]
    for name, table in tblock.components.items():
        lines += [f"  {name} {a} = {f}" for a, f in table.items()]
    for (a, n), val in tblock.tn.items():
        rhs = "auto" if val is None else f"{val[0]} : " + " ".join(val[1])
        lines.append(f"  tn {a} {n} = {rhs}")
    lines.append("end")
    return lines


def presentation_of(cat: FinCategory, ts: Optional[TangentStructure] = None, *, trivial: bool = False,
                    functor_only: bool = False, systems: Optional[Dict[str, Iterable[str]]] = None,
                    algebras: Iterable[FiniteAlgebra] = ()) -> Presentation:
    """Presentation listing only what the file format cannot infer.

    Identities named ``id_X`` and composites with identities are left
    implicit; ``T`` on identities is omitted when it sends them to identities.
    With ``functor_only`` only the functor of ``ts`` is written.  ``T_2``
    witnesses are written as ``tn * 2 = auto`` and must therefore be the
    canonical ones.
    """
    ids = cat.identities()
    idset = set(ids.values())
    pres = Presentation(name=cat.name or "unnamed", objects=list(cat.objects))
    pres.identities = {a: e for a, e in ids.items() if e != f"id_{a}"}
    pres.arrows = {f: (cat.dom(f), cat.cod(f)) for f in cat.morphisms if f not in idset}
    pres.composition = {(f, g): h for (f, g), h in sorted(cat.composition().items())
                        if f not in idset and g not in idset}
    if trivial:
        pres.tangent = TangentBlock(trivial=True)
    elif ts is not None:
        T = ts.T
        tblock = TangentBlock(T_obj={a: T.ob(a) for a in cat.objects})
        tblock.T_mor = {f: T.mor(f) for f in cat.morphisms
                      if not (f in idset and T.mor(f) == ids[T.ob(cat.dom(f))])}
        if not functor_only:
            for name in COMPONENT_NAMES:
                if name == "n" and ts.neg is None:
                    continue
                tblock.components[name] = dict(sorted(ts.component(name).items()))
            if cat.objects:
                tblock.tn[("*", 2)] = None
        pres.tangent = tblock
    for s, members in (systems or {}).items():
        pres.systems[s] = tuple(sorted(members))
    for alg in algebras:
        pres.algebras[alg.name] = algebra_block(alg)
    return pres


def algebra_block(alg: FiniteAlgebra) -> AlgebraBlock:
    mult = {tuple(int(x) for x in idx): int(alg.mult[idx]) for idx in zip(*np.nonzero(alg.mult))}
    return AlgebraBlock(alg.name, alg.prime, tuple(alg.basis), tuple(int(u) for u in alg.unit),
                       dict(sorted(mult.items())))
