"""Rewrite the well-formed bundled presentation files from the in-code catalog.

Run from the repository root:  python demos/regenerate_data.py
Malformed files (``bad_*.cat``) are hand-written and left alone.
"""

from pathlib import Path

from tandisp.catalog import EXAMPLES, load_example
from tandisp.cli import Presentation, presentation_of, serialize
from tandisp.cli.serialize import algebra_block
from tandisp.constructions import open_members
from tandisp.ringcat import bundled_f2_algebras

DATA = Path(__file__).resolve().parents[1] / "src" / "tandisp" / "data"

# extra named systems, beyond the open subobjects written for every tangent example
EXTRA_SYSTEMS = {"finset2": {"collapse": ["2to1_00"]}}


def main():
    for name, (_, kind) in EXAMPLES.items():
        cat, ts = load_example(name)
        systems = {}
        if kind != "functor":
            opens = open_members(cat, ts)
            if opens:
                systems["opens"] = opens
        systems.update(EXTRA_SYSTEMS.get(name, {}))
        pres = presentation_of(cat, ts, trivial=kind == "trivial", functor_only=kind == "functor",
                               systems=systems)
        (DATA / f"{name}.cat").write_text(serialize(pres), encoding="utf-8")
    algs = Presentation()
    for a in bundled_f2_algebras():
        algs.algebras[a.name] = algebra_block(a)
    (DATA / "f2_algebras.cat").write_text(serialize(algs), encoding="utf-8")


if __name__ == "__main__":
    main()
