"""Statistical ensembles of a configuration against a probability measure on the grid.

For a localizable configuration with fiber projectors ``p_k`` and a measure
with weights ``w_k`` the ensemble state is ``a -> sum_k w_k Tr(p_k a(k))``.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .configspace import ParameterGrid, admissibility_check, is_localizable
from .errors import DimensionMismatch, GridMismatch, NotLocalizable, ValidationError

NORMALIZATION_TOL = 1e-12
FILE_NORMALIZATION_TOL = 1e-6


class GeneralConfigurationWarning(UserWarning):
    """Ensemble of a non-localizable configuration evaluated in permissive mode."""


@dataclass(frozen=True, eq=False)
class MeasureOnGrid:
    grid: ParameterGrid
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != self.grid.sizes:
            raise ValidationError(f"weights have shape {w.shape}, grid is {self.grid.sizes}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValidationError("weights must be finite and nonnegative")
        total = math.fsum(w.ravel())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(f"weights sum to {total!r}, not 1")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, grid):
        return cls(grid, np.full(grid.sizes, 1.0 / grid.npoints))

    @classmethod
    def delta(cls, grid, k):
        k = grid.check_point(k)
        w = np.zeros(grid.sizes)
        w[k] = 1.0
        return cls(grid, w)

    @classmethod
    def normalized(cls, grid, weights, tol=FILE_NORMALIZATION_TOL):
        """Rescale weights whose sum is within ``tol`` of 1; reject anything else."""
        w = np.asarray(weights, dtype=float)
        total = math.fsum(w.ravel())
        if not abs(total - 1.0) <= tol:
            raise ValidationError(f"measure weights sum to {total!r}, outside 1 +- {tol:g}")
        return cls(grid, w / total)

    def mix(self, other, t):
        """``t * self + (1 - t) * other``."""
        if self.grid != other.grid:
            raise GridMismatch("measures live on different grids")
        w = t * self.weights + (1.0 - t) * other.weights
        return MeasureOnGrid(self.grid, w / math.fsum(w.ravel()))

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
            sizes = tuple(int(s) for s in data["sizes"])
            weights = np.asarray(data["weights"], dtype=float)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed measure file: {exc}") from exc
        grid = ParameterGrid(sizes)
        if weights.size != grid.npoints:
            raise ValidationError(f"{weights.size} weights for {grid.npoints} grid points")
        return cls.normalized(grid, weights.reshape(sizes))

    def to_json(self):
        return json.dumps({"sizes": list(self.grid.sizes), "weights": self.weights.ravel().tolist()})


def identity_observable(grid, n):
    return np.broadcast_to(np.eye(n, dtype=complex), grid.sizes + (n, n)).copy()


def constant_observable(grid, a):
    a = np.asarray(a, dtype=complex)
    return np.broadcast_to(a, grid.sizes + a.shape).copy()


def load_observable(text, grid, n):
    """Observable file: ``{"identity": true}``, ``{"constant": M}`` or ``{"values": A}``.

    Matrices are nested lists of ``[re, im]`` pairs; ``values`` carries one
    matrix per grid point in row-major order.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid observable JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("observable file must be a JSON object")
    if data.get("identity"):
        return identity_observable(grid, n)
    key = "constant" if "constant" in data else "values" if "values" in data else None
    if key is None:
        raise ValidationError("observable needs one of 'identity', 'constant', 'values'")
    try:
        pairs = np.asarray(data[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"observable {key}: {exc}") from exc
    if pairs.ndim < 1 or pairs.shape[-1] != 2:
        raise ValidationError("observable entries must be [re, im] pairs")
    a = pairs[..., 0] + 1j * pairs[..., 1]
    if key == "constant":
        return constant_observable(grid, a)
    return a


def _check_observable(a, grid, n):
    a = np.asarray(a, dtype=complex)
    if a.shape[:-2] != grid.sizes:
        raise GridMismatch(f"observable sampled on {a.shape[:-2]}, grid is {grid.sizes}")
    if a.shape[-2:] != (n, n):
        raise DimensionMismatch(f"observable is {a.shape[-2:]}, fiber dimension is {n}")
    return a


def ensemble_eval(mu, F, a, general=False):
    """``sum_k w_k Tr(p_k a(k))``.

    With ``general=True`` a non-localizable ``F`` is accepted: the observable
    is read at the grid point nearest to the base-map value ``f_1(k)`` and a
    :class:`GeneralConfigurationWarning` is issued.
    """
    if mu.grid != F.grid:
        raise GridMismatch("measure and configuration live on different grids")
    a = _check_observable(a, F.grid, F.n)
    if is_localizable(F):
        at = a
    elif general:
        warnings.warn("configuration is not localizable; evaluating along its base map",
                      GeneralConfigurationWarning, stacklevel=2)
        idx = np.array([F.grid.nearest_point(F.base[k]) for k in F.grid.points()])
        at = a[tuple(idx.T)].reshape(a.shape)
    else:
        raise NotLocalizable("ensemble states need a localizable configuration")
    v = F.fiber
    values = np.einsum("...i,...ij,...j->...", np.conj(v), at, v)
    terms = (mu.weights * values).ravel()
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


@dataclass(frozen=True)
class PathReport:
    """Largest jump between adjacent frames, per observable, at T, 2T, 4T steps.

    ``max_jump[level][obs]``; ``trend[obs]`` lists that observable's maxima
    across the three refinement levels.
    """

    steps: tuple
    max_jump: tuple

    @property
    def trend(self):
        return [list(col) for col in zip(*self.max_jump)]

    def ratios(self):
        out = []
        for col in self.trend:
            out.append([b / a if a > 0 else 0.0 for a, b in zip(col, col[1:])])
        return out


def _frame_values(phi, mu, obs):
    for frame in phi.frames:
        if not is_localizable(frame):
            raise NotLocalizable("every homotopy frame must be localizable")
        if not admissibility_check(frame).admissible:
            raise ValidationError("a homotopy frame is not admissible")
    return np.array([[ensemble_eval(mu, fr, a) for a in obs] for fr in phi.frames])


def path_equivalence_certify(phi, mu, obs, levels=3):
    """Discrete path-continuity of the ensemble states along a homotopy.

    The homotopy is resampled at ``T, 2T, 4T, ...`` frames (``levels`` of
    them) through its builder; at each level the largest change of each
    observable's expectation between adjacent frames is recorded.
    """
    obs = list(obs)
    T = phi.steps
    steps, jumps = [], []
    for level in range(levels):
        cur = phi if level == 0 else phi.resample(T * 2 ** level)
        vals = _frame_values(cur, mu, obs)
        jump = np.max(np.abs(np.diff(vals, axis=0)), axis=0)
        steps.append(cur.steps)
        jumps.append(tuple(float(j) for j in jump))
    return PathReport(tuple(steps), tuple(jumps))
