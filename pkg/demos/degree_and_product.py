"""
Degree matrices and the product structure of phases
===================================================

A configuration on the torus has two pieces of data: where its base map
sends the torus (a degree matrix) and which line bundle its fiber states
trace out (a Chern number). Build configurations with both prescribed and
read them back.
"""

import numpy as np

from phaseatlas import ParameterGrid, classify, models
from phaseatlas.configspace import is_localizable

grid = ParameterGrid.square(48)
rng = np.random.default_rng(3)

for _ in range(6):
    M = rng.integers(-2, 3, size=(2, 2))
    c = int(rng.integers(-2, 3))
    F = models.torus_selfmap(M, grid, fiber=models.sphere_wrap(c, grid).fiber)
    pc = classify(F)
    print(f"M={M.tolist()!s:18} c={c:2d} -> degree={pc.degree} chern={pc.chern} localizable={is_localizable(F)}")

# %%
# Sections (base map = identity) always have the identity degree, so among
# them only the Chern number tells phases apart.
for c in (-1, 0, 2):
    print(c, classify(models.sphere_wrap(c, grid)))
