"""
Pure states of matrix algebras and escape to infinity
=====================================================

Vector states ``a -> Tr(p a)`` of the compact operators, sampled in a
finite truncation. Basis states walk off any fixed finite-rank observable,
so their values drop to exactly zero: the sequence converges weak-* to
zero, which is not a state.
"""

import numpy as np

from phaseatlas.states import (
    INFINITY,
    PureStatePoint,
    UnitalizedElement,
    escape_table,
    separating_unit,
    tau_continuity_table,
    tau_eval,
    unitalized_eval,
)

block = np.diag([3.0, 2.0, 1.0])
for n, value in escape_table(12, block):
    print(f"n={n:2d} omega_n(a)={value.real:.1f}")

# %%
# Adjoining a unit adds a state at infinity that only sees the scalar part.
e = UnitalizedElement(np.ones((4, 4)), 3.0)
print("state at infinity:", unitalized_eval(INFINITY, e))

# %%
# Distinct pure states are told apart by some matrix unit.
p = PureStatePoint.from_vector([1, 0, 0])
q = PureStatePoint.from_vector([1, 1j, 0])
i, j = separating_unit(p, q)
print("separating unit:", (i, j))

# %%
# Continuity: rotating the vector by theta moves the value by O(theta).
obs = np.array([[0.25, 1.0], [1.0, -0.5]])
for theta, delta in tau_continuity_table(obs, 0.2 * 0.5 ** np.arange(6)):
    print(f"theta={theta:.5f} |delta|={delta:.2e}")
print("normalization Tr(p 1) =", tau_eval(p, np.eye(3)).real)
