"""
Cellular cohomology and reduced K-theory
========================================

Integer cohomology of small CW complexes from their coboundary matrices.
All the arithmetic is exact (Smith normal form over Python ints).
"""

from phaseatlas.cohomology import (
    IntMatrix,
    cohomology,
    parse_cw,
    reduced_k0,
    smith_normal_form,
    sphere_cw,
    torus_cw,
)
from phaseatlas.errors import DimensionTooHigh

for d in range(1, 5):
    print(f"T^{d}:", ", ".join(str(g) for g in cohomology(torus_cw(d))))

print("S^2:", ", ".join(str(g) for g in cohomology(sphere_cw(2))))

# %%
# Torsion shows up as soon as an attaching map has degree other than +-1.
rp2 = parse_cw("""
cw dim=2
cells k=0 n=1
cells k=1 n=1
cells k=2 n=1
coboundary k=1
2
""")
print("RP^2:", ", ".join(str(g) for g in cohomology(rp2)))

# %%
# For dimension <= 3 the reduced K-group is read off H^2.
for X, name in [(torus_cw(2), "T^2"), (torus_cw(3), "T^3"), (rp2, "RP^2"), (torus_cw(4), "T^4")]:
    try:
        print(f"K0~({name}) = {reduced_k0(X)}")
    except DimensionTooHigh as exc:
        print(f"K0~({name}): {exc}")

# %%
# The reduction itself: U A V = D.
A = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
U, D, V = smith_normal_form(A)
print("D =", D.tolist(), "check:", (U @ A @ V) == D)
