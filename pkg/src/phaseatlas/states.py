"""Pure states of finite matrix algebras and the maps built from them.

A pure state of the n x n matrices is represented by a rank-one orthogonal
projector ``p``; it acts on an observable ``a`` as ``Tr(p a)``. The point at
infinity of the unitalized algebra, which has no projector, is the singleton
:data:`INFINITY`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numkernel
from .errors import DimensionMismatch, IndexOutOfRange, PointOutsideGrid, ValidationError

STATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PureStatePoint:
    p: np.ndarray

    def __post_init__(self):
        p = numkernel.as_complex_matrix(self.p)
        if p.ndim != 2:
            raise ValidationError("a pure state is a single projector")
        if not numkernel.is_rank_one_projector(p, STATE_TOL):
            raise ValidationError("p is not a rank-one orthogonal projector")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=complex)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValidationError("zero vector has no state")
        return cls(numkernel.projector(v / nrm))

    @classmethod
    def basis(cls, n, i):
        if not 0 <= i < n:
            raise IndexOutOfRange(f"basis index {i} not in [0, {n})")
        v = np.zeros(n, dtype=complex)
        v[i] = 1.0
        return cls.from_vector(v)

    @property
    def n(self):
        return self.p.shape[0]


class InfinityPoint:
    """The character ``a + z 1 -> z`` of the unitalized compacts."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = InfinityPoint()


@dataclass(frozen=True, eq=False)
class UnitalizedElement:
    """``compact_part + scalar_part * 1``."""

    compact_part: np.ndarray
    scalar_part: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "compact_part", numkernel.as_complex_matrix(self.compact_part))
        z = complex(self.scalar_part)
        if not np.isfinite(z):
            raise ValidationError("scalar part must be finite")
        object.__setattr__(self, "scalar_part", z)


def _matrix(a, n):
    a = numkernel.as_complex_matrix(a)
    if a.shape != (n, n):
        raise DimensionMismatch(f"observable is {a.shape}, state lives on C^{n}")
    return a


def tau_eval(p, a):
    """``Tr(p a)``."""
    a = _matrix(a, p.n)
    return complex(np.einsum("ij,ji->", p.p, a))


def product_state_eval(x, p, f, a):
    """``(delta_x (x) tau_p)(f (x) a) = f(x) Tr(p a)``.

    ``f`` is an array of scalars indexed by grid points; ``x`` a multi-index.
    """
    f = np.asarray(f)
    x = _grid_index(x, f.shape)
    return complex(f[x]) * tau_eval(p, a)


def lift_eval(x, p, F):
    """``Tr(p F(x))`` for a grid-indexed family of matrices ``F``, shape ``(*sizes, n, n)``."""
    F = np.asarray(F, dtype=complex)
    if F.ndim < 3:
        raise ValidationError("F must be a grid-indexed family of matrices")
    x = _grid_index(x, F.shape[:-2])
    return tau_eval(p, F[x])


def _grid_index(x, shape):
    x = tuple(int(i) for i in np.atleast_1d(x))
    if len(x) != len(shape) or any(not 0 <= i < n for i, n in zip(x, shape)):
        raise PointOutsideGrid(f"{x} is not a point of a grid of shape {shape}")
    return x


def unitalized_eval(state, e):
    if isinstance(state, InfinityPoint):
        return e.scalar_part
    return tau_eval(state, e.compact_part) + e.scalar_part


def embed(a, N):
    """Place ``a`` in the top-left block of an ``N x N`` zero matrix."""
    a = numkernel.as_complex_matrix(a)
    r = a.shape[0]
    if r > N:
        raise DimensionMismatch(f"cannot embed a {r}x{r} block in dimension {N}")
    out = np.zeros((N, N), dtype=complex)
    out[:r, :r] = a
    return out


def weak_escape_probe(N, a, n):
    """``Tr(p_n a)`` with ``p_n`` the projector on the ``n``-th basis vector (1-based).

    ``a`` is either ``N x N`` or a smaller block embedded in the top-left corner.
    """
    if not 1 <= n <= N:
        raise IndexOutOfRange(f"n={n} not in [1, {N}]")
    a = embed(a, N)
    return tau_eval(PureStatePoint.basis(N, n - 1), a)


def escape_table(N, a):
    return [(n, weak_escape_probe(N, a, n)) for n in range(1, N + 1)]


def rotated_state(theta, n=2, i=0, j=1):
    """Pure state of ``cos(theta) e_i + sin(theta) e_j``."""
    v = np.zeros(n, dtype=complex)
    v[i], v[j] = np.cos(theta), np.sin(theta)
    return PureStatePoint.from_vector(v)


def tau_continuity_table(a, angles):
    """``(theta, |Tr(p_theta a) - Tr(p_0 a)|)`` for a rotation sweep towards ``e_1``."""
    a = numkernel.as_complex_matrix(a)
    n = a.shape[0]
    ref = tau_eval(rotated_state(0.0, n), a)
    return [(float(t), abs(tau_eval(rotated_state(t, n), a) - ref)) for t in angles]


def matrix_units(n):
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            yield (i, j), e


def separating_unit(p, q, tol=1e-8):
    """A matrix unit ``e_ij`` on which the two states differ by more than ``tol``, or None."""
    for ij, e in matrix_units(p.n):
        if abs(tau_eval(p, e) - tau_eval(q, e)) > tol:
            return ij
    return None
