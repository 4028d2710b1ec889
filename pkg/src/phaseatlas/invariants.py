"""Complete phase invariants of configurations on discretized tori.

A configuration's class is the pair (degree matrix of its base map, Chern
vector of its fiber line bundle). Both are computed so that the result is an
exact integer at any admissible sampling:

* winding numbers sum principal-branch increments around a closed loop;
* Chern numbers use the Fukui-Hatsugai-Suzuki link-variable construction,
  whose plaquette fluxes sum to an exact multiple of 2 pi.

Chern sign convention: the lowest band of the two-band model
``sin kx s1 + sin ky s2 + (m + cos kx + cos ky) s3`` has Chern number
``+1`` for ``0 < m < 2`` and ``-1`` for ``-2 < m < 0`` (see
``tests/data/qwz_oracle_256.json``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import numkernel
from .configspace import (
    GeneralConfiguration,
    admissibility_check,
    is_localizable,
    link_overlaps,
    wrap_angle,
)
from .errors import (
    GridMismatch,
    InconsistentWinding,
    NonAdmissibleStep,
    ResidualBreach,
    SliceDisagreement,
    ValidationError,
    VanishingLink,
)

TWO_PI = 2.0 * np.pi
STEP_MARGIN = 1e-9
LINK_TOL = 1e-6
RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class PhaseClass:
    """Exact invariants of a configuration.

    ``degree`` is a tuple of row tuples; ``chern`` is indexed by the
    coordinate pairs ``(i, j), i < j`` in lexicographic order. ``residual``
    is the largest distance from an integer seen before rounding and takes
    no part in equality.
    """

    degree: tuple
    chern: tuple
    residual: float = field(default=0.0, compare=False)

    @property
    def degree_matrix(self):
        return np.array(self.degree, dtype=object).reshape(len(self.degree), -1)

    def to_dict(self):
        return {"degree": [list(r) for r in self.degree], "chern": list(self.chern), "residual": self.residual}

    @classmethod
    def from_dict(cls, data):
        return cls(
            tuple(tuple(int(x) for x in row) for row in data["degree"]),
            tuple(int(c) for c in data["chern"]),
            float(data.get("residual", 0.0)),
        )


def _round(total):
    value = int(round(total))
    return value, abs(total - value)


# -- winding and degree ------------------------------------------------------

def _increments(phases, axis):
    inc = wrap_angle(np.roll(phases, -1, axis=axis) - phases)
    worst = np.max(np.abs(inc)) if inc.size else 0.0
    if worst >= np.pi - STEP_MARGIN:
        raise NonAdmissibleStep(f"angular increment {worst:.6f} is not inside (-pi, pi)")
    return inc


def winding_number_with_residual(phases):
    phases = np.asarray(phases, dtype=float).ravel()
    if phases.size < 2:
        raise ValidationError("a cyclic phase list needs at least two entries")
    inc = _increments(phases, 0)
    return _round(math.fsum(inc) / TWO_PI)


def winding_number(phases):
    """Winding number of a closed, admissibly sampled loop of angles.

    >>> import numpy as np
    >>> winding_number(2 * np.pi * np.arange(8) / 8)
    1
    """
    return winding_number_with_residual(phases)[0]


def degree_matrix_with_residual(F):
    d = F.d
    out = np.zeros((d, d), dtype=object)
    residual = 0.0
    for i in range(d):
        coord = F.base[..., i]
        for j in range(d):
            inc = _increments(coord, j)
            loops = inc.sum(axis=j) / TWO_PI
            ints = np.rint(loops).astype(int)
            if np.any(ints != ints.flat[0]):
                raise InconsistentWinding(
                    f"parallel cycles along axis {j} give windings {sorted(set(ints.ravel().tolist()))} "
                    f"for coordinate {i}"
                )
            out[i, j] = int(ints.flat[0])
            residual = max(residual, float(np.max(np.abs(loops - ints))))
    return out, residual


def degree_matrix(F):
    """Integer matrix ``M[i, j]`` = winding of base coordinate ``i`` along cycle ``j``.

    Every parallel cycle is checked; they must agree.
    """
    return degree_matrix_with_residual(F)[0]


# -- Chern numbers -------------------------------------------------------------

def _check_links(fiber, tol_link, axes_labels=(0, 1)):
    units = []
    for ax, label in zip((0, 1), axes_labels):
        link = link_overlaps(fiber, ax)
        mag = np.abs(link)
        if np.any(mag < tol_link):
            k = np.unravel_index(int(np.argmin(mag)), mag.shape)
            raise VanishingLink(k, label, mag[k])
        units.append(link / mag)
    return units


def fhs_flux(fiber, tol_link=LINK_TOL):
    """Plaquette Berry fluxes of a 2-d array of unit vectors, shape ``(N1, N2, n)``.

    Each flux is the principal argument, in ``(-pi, pi]``, of the product of
    normalized link variables around the plaquette at ``k``.
    """
    fiber = np.asarray(fiber, dtype=complex)
    if fiber.ndim != 3:
        raise ValidationError(f"expected a (N1, N2, n) fiber slice, got shape {fiber.shape}")
    u1, u2 = _check_links(fiber, tol_link)
    loop = u1 * np.roll(u2, -1, axis=0) * np.conj(np.roll(u1, -1, axis=1)) * np.conj(u2)
    flux = np.angle(loop)
    return np.where(flux <= -np.pi, np.pi, flux)


def fhs_chern_with_residual(fiber, tol_link=LINK_TOL):
    flux = fhs_flux(fiber, tol_link)
    return _round(math.fsum(flux.ravel()) / TWO_PI)


def _slices(F, i, j):
    """Yield ``(index, fiber slice)`` for every transverse position of plane (i, j)."""
    rest = [ax for ax in range(F.d) if ax not in (i, j)]
    arr = np.moveaxis(F.fiber, [i, j] + rest, list(range(F.d)))
    for idx in np.ndindex(*arr.shape[2:-1]):
        yield idx, arr[(slice(None), slice(None)) + idx]


def chern_number_fhs(F, plane=(0, 1), index=None, tol_link=LINK_TOL):
    """First Chern number of the fiber line bundle on one 2-torus slice.

    Parameters
    ----------
    F : GeneralConfiguration
    plane : (int, int)
        Coordinate pair spanning the slice.
    index : tuple of int, optional
        Position along the transverse coordinates (required for d = 3).
    """
    i, j = plane
    if F.d < 2 or not (0 <= i < j < F.d):
        raise ValidationError(f"invalid plane {plane} for d={F.d}")
    rest = F.d - 2
    if index is None:
        if rest:
            raise ValidationError("a transverse index is required for d > 2")
        index = ()
    index = tuple(index)
    for idx, sl in _slices(F, i, j):
        if idx == index:
            return fhs_chern_with_residual(sl, tol_link)[0]
    raise ValidationError(f"transverse index {index} is not on the grid")


def chern_vector_with_residual(F, tol_link=LINK_TOL):
    values, residual = [], 0.0
    for i, j in combinations(range(F.d), 2):
        seen = []
        for _, sl in _slices(F, i, j):
            c, r = fhs_chern_with_residual(sl, tol_link)
            seen.append(c)
            residual = max(residual, r)
        if len(set(seen)) != 1:
            raise SliceDisagreement(i, j, seen)
        values.append(seen[0])
    return tuple(values), residual


def chern_vector(F, tol_link=LINK_TOL):
    """Chern numbers for every coordinate plane ``i < j``; empty when d < 2."""
    return chern_vector_with_residual(F, tol_link)[0]


# -- classification ------------------------------------------------------------

def classify(F, tol_link=LINK_TOL, residual_tol=RESIDUAL_TOL):
    deg, r1 = degree_matrix_with_residual(F)
    chern, r2 = chern_vector_with_residual(F, tol_link)
    residual = max(r1, r2)
    if residual > residual_tol:
        raise ResidualBreach(f"rounding residual {residual:.3e} exceeds {residual_tol:g}")
    degree = tuple(tuple(int(x) for x in row) for row in deg)
    return PhaseClass(degree, chern, residual)


def same_phase(F, G, **kwargs):
    if F.d != G.d:
        raise GridMismatch(f"configurations live on tori of dimension {F.d} and {G.d}")
    return classify(F, **kwargs) == classify(G, **kwargs)


@dataclass(frozen=True)
class HomotopyCertificate:
    """Frame-by-frame validation of a homotopy.

    ``valid`` means every frame is rank one and admissible; ``classes`` holds
    the class of each frame (``None`` where classification failed).
    """

    rank_one: tuple
    admissible: tuple
    classes: tuple
    valid: bool

    @property
    def class_constant(self):
        return all(c is not None for c in self.classes) and len(set(self.classes)) == 1

    @property
    def endpoints_equal(self):
        return self.classes[0] is not None and self.classes[0] == self.classes[-1]

    @property
    def failures(self):
        """Indices of frames that fail validation or jump class from the previous frame."""
        out = []
        for idx, (r, a, c) in enumerate(zip(self.rank_one, self.admissible, self.classes)):
            jump = idx > 0 and c != self.classes[idx - 1]
            if not (r and a) or c is None or jump:
                out.append(idx)
        return out


def certify_homotopy(phi, tol_link=LINK_TOL):
    rank_one, admissible, classes = [], [], []
    for frame in phi.frames:
        rank_one.append(bool(np.all(numkernel.is_rank_one_projector(frame.projectors()))))
        admissible.append(admissibility_check(frame).admissible)
        try:
            classes.append(classify(frame, tol_link=tol_link))
        except (ArithmeticError, ValueError):
            classes.append(None)
    return HomotopyCertificate(tuple(rank_one), tuple(admissible), tuple(classes),
                               all(rank_one) and all(admissible))


__all__ = [
    "PhaseClass",
    "winding_number",
    "degree_matrix",
    "fhs_flux",
    "chern_number_fhs",
    "chern_vector",
    "classify",
    "same_phase",
    "certify_homotopy",
    "HomotopyCertificate",
    "is_localizable",
    "GeneralConfiguration",
]
