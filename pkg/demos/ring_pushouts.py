"""Pushouts of finite commutative algebras and the dual-numbers functor.

    python demos/ring_pushouts.py
"""

from tandisp.ringcat import check_T_preserves_pushout, dual_numbers, enumerate_homs, f2, f2_dual, tensor_over

M, N = f2(), f2_dual()
f = enumerate_homs(M, N)[0]

# F2[x]/x^2 tensored with itself over F2 has basis 1, x, y, xy.
po = tensor_over(M, N, N, f, f)
print(f"pushout: dimension {po.algebra.dim}, {po.algebra.size} elements")
print(f"dual numbers of it: {dual_numbers(po.algebra).size} elements")

# Applying T before or after the pushout gives isomorphic algebras, level by level.
rep = check_T_preserves_pushout(po, depth=2)
for level in rep["levels"]:
    print(level)
print("T preserves this pushout to depth", rep["verified_to_depth"], ":", rep["holds"])
