"""
Ensemble states along a homotopy
================================

Average a configuration's pointwise expectation values against a
probability measure on the grid. Along a smooth deformation the resulting
state moves continuously: the largest step between adjacent frames halves
each time the t-grid is doubled.
"""

import numpy as np

from phaseatlas import ParameterGrid, models
from phaseatlas.configspace import hamiltonian_homotopy, homotopy_interpolate
from phaseatlas.ensemble import MeasureOnGrid, ensemble_eval, identity_observable, path_equivalence_certify

grid = ParameterGrid.square(24)
F = models.qwz_configuration(1.0, grid)
G = models.qwz_configuration(1.5, grid)
mu = MeasureOnGrid.uniform(grid)

print("omega(1) =", ensemble_eval(mu, F, identity_observable(grid, 2)))
print("omega(h) =", ensemble_eval(mu, F, models.qwz(1.0, grid)))

# %%
# A point mass recovers the pure state at that grid point.
k0 = (3, 10)
a = models.qwz(1.0, grid)
v = F.fiber[k0]
print("delta:", ensemble_eval(MeasureOnGrid.delta(grid, k0), F, a), "direct:", np.vdot(v, a[k0] @ v))

# %%
# Two homotopies between the same endpoints, refined T = 8, 16, 32.
obs = [models.qwz(1.0, grid) / 3.0]
for name, phi in [
    ("projector interpolation", homotopy_interpolate(F, G, 8)),
    ("mass path", hamiltonian_homotopy(lambda t: models.qwz(1.0 + 0.5 * t, grid), grid, 8)),
]:
    rep = path_equivalence_certify(phi, mu, obs)
    jumps = rep.trend[0]
    print(f"{name:24} max_jump={['%.2e' % j for j in jumps]} ratios={['%.3f' % r for r in rep.ratios()[0]]}")
