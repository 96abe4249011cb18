"""Which maps in a small tangent category are display maps, and why the others are not.

    python demos/display_maps.py
"""

from tandisp.catalog import load_example
from tandisp.display import classify_all, maximal_tangent_display_system
from tandisp.limits import Square, is_pullback_square, is_T_pullback

# A "V" shape a -> c <- b has no pullback, so neither leg is a display map.
cat, ts = load_example("vposet")
for q, v in sorted(classify_all(cat, ts).items()):
    print(f"{q:6s} display={v.is_display!s:5s} t_display={v.is_t_display!s:5s}",
          v.witnesses.get("display", ""))

# The maximal tangent display system is the set of all tangent display maps.
sv = maximal_tangent_display_system(cat, ts)
print("maximal system:", sorted(sv.members), "closed under composition:", sv.closed_under_composition)

# A pullback need not survive the tangent functor.  In t_collapse, T sends b to the
# top, so the meet square of the diamond stops being a pullback after one application.
cat, ts = load_example("t_collapse")
sq = Square("bot_b", "a_top", "bot_a", "b_top")
print("pullback:", is_pullback_square(cat, sq).holds)
v = is_T_pullback(cat, ts.T, sq)
print("T-pullback:", v.holds, "first failing power:", v.failing_k)
