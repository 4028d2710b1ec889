"""Concrete model families on the discretized torus.

Hamiltonian generators return an array of shape ``(*grid.sizes, n, n)``;
turn them into configurations with
:func:`phaseatlas.configspace.from_hamiltonian`.

Hofstadter convention (Landau gauge, flux ``p/q`` per plaquette): the grid
angles are ``(q kx, ky)``, so one sweep of the first grid coordinate covers
the magnetic Brillouin zone ``kx in [0, 2 pi / q)`` exactly once. The Harper
matrix is ``h[j, j] = 2 cos(ky + 2 pi p j / q)``, ``h[j, j+1] = 1`` and the
wrap-around hopping ``h[0, q-1] += exp(-i q kx)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .configspace import GeneralConfiguration, ParameterGrid, from_hamiltonian, wrap_positive
from .errors import GridTooCoarse, NotCoprime, ValidationError

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_1, SIGMA_2, SIGMA_3])

QWZ_CRITICAL_MASSES = (-2.0, 0.0, 2.0)


@dataclass(frozen=True)
class ModelSpec:
    name: str
    params: dict = field(default_factory=dict)
    grid: ParameterGrid = None


def _require_d(grid, d):
    if grid.d != d:
        raise ValidationError(f"model needs a {d}-dimensional grid, got d={grid.d}")


def dvector_hamiltonian(dvec):
    """``d(k) . sigma`` for a field of 3-vectors, shape ``(..., 3)``."""
    return np.einsum("...a,aij->...ij", np.asarray(dvec, dtype=float), PAULI)


def qwz_dvector(m, kx, ky):
    return np.stack([np.sin(kx), np.sin(ky), m + np.cos(kx) + np.cos(ky)], axis=-1)


def qwz(m, grid):
    """Two-band model ``sin kx s1 + sin ky s2 + (m + cos kx + cos ky) s3``.

    The gap closes at ``m = -2, 0, 2`` (at ``(0,0)``, ``(pi,0)``/``(0,pi)``,
    ``(pi,pi)`` respectively).
    """
    _require_d(grid, 2)
    k = grid.angles()
    return dvector_hamiltonian(qwz_dvector(float(m), k[..., 0], k[..., 1]))


def qwz_configuration(m, grid, **kwargs):
    return from_hamiltonian(qwz(m, grid), grid, **kwargs)[0]


def hofstadter(p, q, grid):
    """Harper matrix of flux ``p/q`` on the magnetic Brillouin torus.

    Returns an array ``(*grid.sizes, q, q)``; see the module docstring for the
    gauge and the coordinates.
    """
    _require_d(grid, 2)
    p, q = int(p), int(q)
    if q < 2:
        raise ValidationError("q must be >= 2")
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {gcd(p, q)}")
    k = grid.angles()
    qkx, ky = k[..., 0], k[..., 1]
    h = np.zeros(grid.sizes + (q, q), dtype=complex)
    for j in range(q):
        h[..., j, j] = 2.0 * np.cos(ky + 2.0 * np.pi * p * j / q)
    for j in range(q - 1):
        h[..., j, j + 1] += 1.0
        h[..., j + 1, j] += 1.0
    closing = np.exp(-1j * qkx)
    h[..., 0, q - 1] += closing
    h[..., q - 1, 0] += np.conj(closing)
    return h


def hofstadter_bands(p, q, grid, **kwargs):
    """One localizable configuration per Harper band, lowest first."""
    h = hofstadter(p, q, grid)
    return [from_hamiltonian(h, grid, band=b, **kwargs)[0] for b in range(int(q))]


def tknn_solution(p, q, r=1):
    """Integer ``t`` with ``r = q s + p t`` and ``|t| <= q/2``.

    For even ``q`` and ``r = q/2`` both signs are valid; the positive one is
    returned.
    """
    p, q = int(p), int(q)
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {gcd(p, q)}")
    sols = [t for t in range(-q, q + 1) if (r - p * t) % q == 0 and 2 * abs(t) <= q]
    if not sols:
        raise ValidationError(f"no Diophantine solution for p={p}, q={q}, r={r}")
    return max(sols, key=lambda t: (-abs(t), t))


def _check_fine(grid, need):
    if min(grid.sizes) < need:
        raise GridTooCoarse(f"grid {grid.sizes} too coarse, need every size >= {need}")


def sphere_wrap(c, grid):
    """Localizable two-band configuration with Chern number ``c`` times that of QWZ at m=1.

    The fiber is the lower band of ``n(k) . sigma`` with ``n`` the QWZ (m=1)
    unit vector precomposed with ``(kx, ky) -> (c kx, ky)``, a map T^2 -> S^2
    of degree ``c`` times the degree of the QWZ map.
    """
    _require_d(grid, 2)
    c = int(c)
    _check_fine(grid, 8 * (abs(c) + 1))
    k = grid.angles()
    h = dvector_hamiltonian(qwz_dvector(1.0, c * k[..., 0], k[..., 1]))
    return from_hamiltonian(h, grid)[0]


def torus_selfmap(M, grid, fiber=None):
    """Configuration with base map ``k -> M k mod 2 pi`` and constant fiber ``e_1``.

    A ``fiber`` array ``(*sizes, n)`` may be supplied instead of the constant one.
    """
    M = np.asarray(M)
    if M.shape != (grid.d, grid.d) or not np.all(M == np.rint(M)):
        raise ValidationError(f"M must be an integer {grid.d}x{grid.d} matrix")
    M = M.astype(int)
    rowsum = int(np.max(np.sum(np.abs(M), axis=1))) if M.size else 0
    _check_fine(grid, 8 * rowsum)
    base = wrap_positive(np.einsum("ij,...j->...i", M.astype(float), grid.angles()))
    if fiber is None:
        fiber = GeneralConfiguration.constant(grid).fiber
    return GeneralConfiguration(grid, base, fiber)


def constant_along(F2, n3):
    """Extend a d=2 configuration to d=3, constant along the third coordinate."""
    grid = ParameterGrid(F2.grid.sizes + (int(n3),))
    fiber = np.repeat(F2.fiber[:, :, None, :], n3, axis=2)
    return GeneralConfiguration.section(grid, fiber)
