"""
QWZ phase diagram from lattice Chern numbers
============================================

Sweep the mass of the two-band model
``h(k) = sin kx s1 + sin ky s2 + (m + cos kx + cos ky) s3`` and classify the
lowest band at every mass. The Chern number only changes where the gap
closes, at m = -2, 0, 2.
"""

import numpy as np

from phaseatlas import ParameterGrid, models
from phaseatlas.configspace import from_hamiltonian
from phaseatlas.errors import GapClosure
from phaseatlas.invariants import chern_vector_with_residual

grid = ParameterGrid.square(24)

# %%
# Walk across the three transitions. Critical masses raise GapClosure
# instead of producing a number.
print(f"{'m':>6} {'gap':>8} {'C':>3} {'residual':>10}")
for m in np.round(np.arange(-3.0, 3.01, 0.5), 2):
    try:
        F, gap = from_hamiltonian(models.qwz(m, grid), grid)
    except GapClosure as exc:
        print(f"{m:6.2f}   gap closes at k index {exc.k}")
        continue
    (c,), res = chern_vector_with_residual(F)
    print(f"{m:6.2f} {gap:8.4f} {c:3d} {res:10.1e}")

# %%
# The integer holds up when the grid is refined, and it is unchanged by a
# random U(1) gauge at every grid point.
rng = np.random.default_rng(0)
for N in (12, 24, 48):
    g = ParameterGrid.square(N)
    F = models.qwz_configuration(1.0, g)
    twisted = F.with_fiber(F.fiber * np.exp(2j * np.pi * rng.random(g.sizes))[..., None])
    print(N, chern_vector_with_residual(F)[0], chern_vector_with_residual(twisted)[0])
