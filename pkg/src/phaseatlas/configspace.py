"""Discretized tori, configurations on them, and homotopies between them.

A configuration pairs a *base map* (grid point -> point of the torus, stored
as ``d`` angles) with a *fiber map* (grid point -> unit vector of C^n). The
fiber vector is a representative of a pure state; its phase is a gauge
choice and nothing exported from this package depends on it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import numkernel
from .errors import (
    GapClosure,
    GridMismatch,
    MidpointDegeneracy,
    PointOutsideGrid,
    ValidationError,
)

TWO_PI = 2.0 * np.pi
MIN_GRID_SIZE = 4
LOCALIZABLE_TOL = 1e-12
UNIT_TOL = 1e-10
MIN_LINK = 0.1
MAX_BASE_STEP = np.pi / 2
MIDPOINT_GAP_TOL = 1e-6


def wrap_angle(x):
    """Reduce angles into ``(-pi, pi]``; ``-pi`` itself maps to ``+pi``."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), TWO_PI)


def wrap_positive(x):
    """Reduce angles into ``[0, 2 pi)``."""
    y = np.mod(np.asarray(x, dtype=float), TWO_PI)
    return np.where(y >= TWO_PI, 0.0, y)


@dataclass(frozen=True)
class ParameterGrid:
    """Periodic grid ``k_i in {0..N_i-1}`` on the torus T^d, angle ``2 pi k_i / N_i``."""

    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not 1 <= len(sizes) <= 3:
            raise ValidationError(f"torus dimension must be 1, 2 or 3, got {len(sizes)}")
        if any(s < MIN_GRID_SIZE for s in sizes):
            raise ValidationError(f"grid sizes must be >= {MIN_GRID_SIZE}, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def square(cls, n, d=2):
        return cls((n,) * d)

    @property
    def d(self):
        return len(self.sizes)

    @property
    def npoints(self):
        return int(np.prod(self.sizes))

    def axes(self):
        """One 1-d array of angles per coordinate."""
        return [TWO_PI * np.arange(n) / n for n in self.sizes]

    def angles(self):
        """Angles of every grid point, shape ``(*sizes, d)``."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack(mesh, axis=-1)

    def points(self):
        return np.ndindex(*self.sizes)

    def check_point(self, k):
        k = tuple(int(i) for i in np.atleast_1d(k))
        if len(k) != self.d or any(not 0 <= i < n for i, n in zip(k, self.sizes)):
            raise PointOutsideGrid(f"{k} is not a point of the grid {self.sizes}")
        return k

    def nearest_point(self, theta):
        """Grid point closest to the torus point ``theta`` (d angles)."""
        theta = wrap_positive(theta)
        k = np.rint(theta * np.array(self.sizes) / TWO_PI).astype(int)
        return tuple(int(i) % n for i, n in zip(k, self.sizes))


@dataclass(frozen=True, eq=False)
class GeneralConfiguration:
    """A configuration ``x -> (base(x), fiber(x))`` on a grid.

    Parameters
    ----------
    grid : ParameterGrid
    base : ndarray, (*sizes, d)
        Base-map angles in ``[0, 2 pi)``.
    fiber : ndarray, (*sizes, n)
        Unit complex vectors.
    """

    grid: ParameterGrid
    base: np.ndarray
    fiber: np.ndarray

    def __post_init__(self):
        g = self.grid
        base = np.asarray(self.base, dtype=float)
        fiber = np.asarray(self.fiber, dtype=complex)
        if base.shape != g.sizes + (g.d,):
            raise ValidationError(f"base map has shape {base.shape}, expected {g.sizes + (g.d,)}")
        if fiber.ndim != g.d + 1 or fiber.shape[:-1] != g.sizes or fiber.shape[-1] < 1:
            raise ValidationError(f"fiber map has shape {fiber.shape}, expected {g.sizes} + (n,)")
        if not (np.all(np.isfinite(base)) and np.all(np.isfinite(fiber))):
            raise ValidationError("configuration has non-finite values")
        if np.any(base < 0) or np.any(base >= TWO_PI):
            raise ValidationError("base map values must lie in [0, 2 pi)")
        norms = np.linalg.norm(fiber, axis=-1)
        bad = np.abs(norms - 1.0) > UNIT_TOL
        if np.any(bad):
            k = tuple(int(i) for i in np.argwhere(bad)[0])
            raise ValidationError(f"fiber vector at grid point {k} has norm {norms[k]:.12g}; a unit vector is required")
        base.setflags(write=False)
        fiber.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "fiber", fiber)

    @classmethod
    def section(cls, grid, fiber):
        """Localizable configuration: identity base map."""
        return cls(grid, grid.angles(), fiber)

    @classmethod
    def constant(cls, grid, n=2, vector=None):
        v = np.zeros(n, dtype=complex)
        if vector is None:
            v[0] = 1.0
        else:
            v = np.asarray(vector, dtype=complex)
            v = v / np.linalg.norm(v)
        fiber = np.broadcast_to(v, grid.sizes + (v.size,)).copy()
        return cls.section(grid, fiber)

    @property
    def n(self):
        return self.fiber.shape[-1]

    @property
    def d(self):
        return self.grid.d

    def projectors(self):
        return numkernel.projector(self.fiber)

    def with_base(self, base):
        return GeneralConfiguration(self.grid, base, self.fiber)

    def with_fiber(self, fiber):
        return GeneralConfiguration(self.grid, self.base, fiber)

    # -- JSON ---------------------------------------------------------------

    def to_dict(self):
        base = "identity" if is_localizable(self) else self.base.tolist()
        fiber = np.stack([self.fiber.real, self.fiber.imag], axis=-1).tolist()
        return {"d": self.d, "sizes": list(self.grid.sizes), "n": self.n, "base_map": base, "fiber": fiber}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        try:
            d = int(data["d"])
            sizes = tuple(int(s) for s in data["sizes"])
            n = int(data["n"])
            base_raw = data["base_map"]
            fiber_raw = data["fiber"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed configuration: {exc!r}") from exc
        grid = ParameterGrid(sizes)
        if grid.d != d:
            raise ValidationError(f"d={d} but sizes has {grid.d} entries")
        if isinstance(base_raw, str):
            if base_raw != "identity":
                raise ValidationError(f"unknown base_map keyword {base_raw!r}")
            base = grid.angles()
        else:
            base = _array(base_raw, float, grid.sizes + (d,), "base_map")
        pairs = _array(fiber_raw, float, grid.sizes + (n, 2), "fiber")
        return cls(grid, base, pairs[..., 0] + 1j * pairs[..., 1])

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def _array(raw, dtype, shape, name):
    try:
        arr = np.asarray(raw, dtype=dtype)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name}: {exc}") from exc
    if arr.shape != shape:
        raise ValidationError(f"{name} has shape {arr.shape}, expected {shape}")
    return arr


def is_localizable(F):
    """True iff the base map is the identity section on every grid point."""
    dev = np.abs(wrap_angle(F.base - F.grid.angles()))
    return bool(np.all(dev <= LOCALIZABLE_TOL))


def band_gaps(eigenvalues, band):
    """Distance from band ``band`` to its nearest neighbouring band, per point."""
    w = eigenvalues
    gaps = []
    if band + 1 < w.shape[-1]:
        gaps.append(w[..., band + 1] - w[..., band])
    if band > 0:
        gaps.append(w[..., band] - w[..., band - 1])
    if not gaps:
        return np.full(w.shape[:-1], np.inf)
    return np.minimum.reduce(gaps)


def from_hamiltonian(h, grid, gap_tol=numkernel.GAP_TOL, band=0):
    """Localizable configuration of one isolated band of ``h``.

    Parameters
    ----------
    h : ndarray, (*sizes, n, n)
        Hermitian matrix at every grid point.
    grid : ParameterGrid
    gap_tol : float
    band : int
        Band index counted from the bottom; 0 is the lowest band.

    Returns
    -------
    (GeneralConfiguration, float)
        The configuration and the minimal gap to neighbouring bands.

    Raises
    ------
    GapClosure
        At the first grid point (row-major) of minimal gap when it is <= gap_tol.
    """
    h = numkernel.as_complex_matrix(h)
    if h.shape[:-2] != grid.sizes:
        raise GridMismatch(f"Hamiltonian sampled on {h.shape[:-2]}, grid is {grid.sizes}")
    n = h.shape[-1]
    if not 0 <= band < n or n < 2:
        raise ValidationError(f"band {band} out of range for {n}x{n} Hamiltonian")
    spectrum = numkernel.eigh(h)
    gaps = band_gaps(spectrum.eigenvalues, band)
    k = np.unravel_index(int(np.argmin(gaps)), grid.sizes)
    min_gap = float(gaps[k])
    if min_gap <= gap_tol:
        raise GapClosure(k, min_gap)
    fiber = spectrum.eigenvectors[..., band]
    fiber = fiber / np.linalg.norm(fiber, axis=-1, keepdims=True)
    return GeneralConfiguration.section(grid, fiber), min_gap


@dataclass(frozen=True)
class AdmissibilityReport:
    """Sampling-fineness diagnostics.

    ``worst_link`` and ``worst_step`` are ``(grid point, axis)`` of the
    smallest neighbour overlap and of the largest base-map increment.
    """

    min_link: float
    max_base_step: float
    admissible: bool
    worst_link: tuple = None
    worst_step: tuple = None


def link_overlaps(fiber, axis):
    """``<u(k), u(k + e_axis)>`` with periodic wraparound."""
    nxt = np.roll(fiber, -1, axis=axis)
    return np.sum(np.conj(fiber) * nxt, axis=-1)


def _extreme(arrays, pick):
    vals = [pick(a) for a in arrays]
    ax = int(np.argmin(vals) if pick is np.min else np.argmax(vals))
    arr = arrays[ax]
    flat = np.argmin(arr) if pick is np.min else np.argmax(arr)
    k = tuple(int(i) for i in np.unravel_index(int(flat), arr.shape))
    return float(vals[ax]), (k, ax)


def admissibility_check(F, min_link=MIN_LINK, max_base_step=MAX_BASE_STEP):
    links = [np.abs(link_overlaps(F.fiber, ax)) for ax in range(F.d)]
    steps = [np.abs(wrap_angle(np.roll(F.base, -1, axis=ax) - F.base)).max(axis=-1)
             for ax in range(F.d)]
    lo, where_lo = _extreme(links, np.min)
    hi, where_hi = _extreme(steps, np.max)
    ok = bool(lo >= min_link and hi <= max_base_step)
    return AdmissibilityReport(lo, hi, ok, where_lo, where_hi)


@dataclass(frozen=True)
class Homotopy:
    """Frames ``phi(., t)`` of a deformation on an equispaced ``t`` grid.

    ``builder`` (when present) maps ``t`` to the frame at ``t``; it lets the
    same deformation be resampled at a finer ``t`` grid via :meth:`resample`.
    """

    t: np.ndarray
    frames: tuple
    builder: Optional[Callable[[float], GeneralConfiguration]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.t) != len(self.frames) or len(self.frames) < 2:
            raise ValidationError("a homotopy needs T + 1 >= 2 frames matching the t grid")
        g0, n0 = self.frames[0].grid, self.frames[0].n
        if any(fr.grid != g0 or fr.n != n0 for fr in self.frames):
            raise GridMismatch("homotopy frames must share grid and fiber dimension")

    @property
    def steps(self):
        return len(self.frames) - 1

    @classmethod
    def from_builder(cls, builder, T):
        t = np.linspace(0.0, 1.0, T + 1)
        return cls(t, tuple(builder(float(s)) for s in t), builder)

    def resample(self, T):
        if self.builder is None:
            raise ValidationError("this homotopy has no builder to resample from")
        return Homotopy.from_builder(self.builder, T)

    def reversed(self):
        builder = None if self.builder is None else (lambda s, b=self.builder: b(1.0 - s))
        return Homotopy(1.0 - self.t[::-1], self.frames[::-1], builder)


def _interpolated_frame(F, G, t):
    if t == 0.0:
        return F
    if t == 1.0:
        return G
    pf, pg = F.projectors(), G.projectors()
    spectrum = numkernel.eigh((1.0 - t) * pf + t * pg)
    top = spectrum.eigenvalues[..., -1] - spectrum.eigenvalues[..., -2]
    k = np.unravel_index(int(np.argmin(top)), F.grid.sizes)
    if top[k] < MIDPOINT_GAP_TOL:
        raise MidpointDegeneracy(k, t)
    v = spectrum.eigenvectors[..., -1]
    # fix the gauge against F so frames vary smoothly in t
    ov = np.sum(np.conj(F.fiber) * v, axis=-1)
    mag = np.abs(ov)
    v = v * np.where(mag > 0, np.conj(ov) / np.where(mag > 0, mag, 1.0), 1.0)[..., None]
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    # where both ends already agree the path is exactly constant
    same = np.all(pf == pg, axis=(-2, -1))
    v = np.where(same[..., None], F.fiber, v)
    base = wrap_positive(F.base + t * wrap_angle(G.base - F.base))
    return GeneralConfiguration(F.grid, base, v)


def homotopy_interpolate(F, G, T):
    """Straight-line deformation of projectors, re-purified at every step.

    The fiber at ``t`` spans the top eigenvector of ``(1-t) p_F + t p_G``;
    the base map follows the shortest arc in every coordinate.

    Raises
    ------
    MidpointDegeneracy
        Where the two projectors are (nearly) orthogonal, so the mixture has
        no distinguished top eigenvector.
    """
    if F.grid != G.grid or F.n != G.n:
        raise GridMismatch("configurations must share grid and fiber dimension")
    if T < 1:
        raise ValidationError("need at least one step")
    return Homotopy.from_builder(lambda t: _interpolated_frame(F, G, t), int(T))


def hamiltonian_homotopy(h_of_t, grid, T, gap_tol=numkernel.GAP_TOL, band=0):
    """Homotopy of band configurations along a path of Hamiltonians ``t -> h(t)``.

    Raises :class:`GapClosure` at the first frame whose band gap closes.
    """

    def builder(t):
        return from_hamiltonian(h_of_t(t), grid, gap_tol=gap_tol, band=band)[0]

    return Homotopy.from_builder(builder, int(T))


def frames_close(a: Sequence[GeneralConfiguration], b: Sequence[GeneralConfiguration], tol=1e-10):
    """Frame-by-frame equality of projectors and base maps."""
    if len(a) != len(b):
        return False
    for fa, fb in zip(a, b):
        if np.max(np.abs(fa.projectors() - fb.projectors())) > tol:
            return False
        if np.max(np.abs(wrap_angle(fa.base - fb.base))) > tol:
            return False
    return True
