"""Build the derived categories: idempotent splitting, slices, partial maps.

    python demos/constructions.py
"""

from tandisp.catalog import load_example
from tandisp.constructions import karoubi_envelope, open_subobjects, slice_tangent_category

# The monoid {1, e} with e;e = e has one idempotent that does not split.
cat, ts = load_example("monoid_e")
out = karoubi_envelope(cat, ts)
print("split objects:", out.split_cat.objects)
print("failing checks:", [k for k, v in out.checks.items() if not v] or "none")

# Slicing the diamond over its top object keeps only tangent display maps into it.
cat, ts = load_example("diamond")
sl = slice_tangent_category(cat, ts, "top")
print("slice objects over top:", sorted(sl.under_obj.values()))
print("terminal:", sl.terminal)

# Open subobjects of the two-element set form a poset whose meets are pullbacks,
# and the monic ones generate a restriction category of partial maps.
cat, ts = load_example("finset2")
op = open_subobjects(cat, ts)
print("open monics into 2:", op.elements.get("2"))
print("meet of the two points:", op.meets[("1to2_0", "1to2_1")])
par = op.par
print("partial maps:", len(par.par_cat.morphisms), "restriction checks:",
      all(bool(v) for v in par.checks.values()))
