"""
Harper bands and the TKNN relation
==================================

At rational flux p/q the Hofstadter model splits into q magnetic Bloch
bands. Each isolated band carries a Chern number. The lowest one is fixed
by the Diophantine equation 1 = q s + p t.
"""

from phaseatlas import ParameterGrid, models
from phaseatlas.errors import GapClosure
from phaseatlas.invariants import chern_vector

grid = ParameterGrid.square(24)

for p, q in [(1, 3), (2, 3), (1, 4), (1, 5), (2, 5), (3, 7), (1, 2)]:
    t = models.tknn_solution(p, q)
    try:
        bands = models.hofstadter_bands(p, q, grid)
    except GapClosure as exc:
        # even q: the two central bands touch (Dirac points), so no lowest-band
        # Chern number is defined
        print(f"p/q={p}/{q}: bands touch ({exc}); TKNN t={t}")
        continue
    cherns = [chern_vector(b)[0] for b in bands]
    print(f"p/q={p}/{q}: C={cherns} sum={sum(cherns)} lowest={cherns[0]} TKNN t={t}")

# %%
# The TKNN integer enters with a minus sign in the convention used here,
# where the QWZ lowest band at 0 < m < 2 has C = +1.
