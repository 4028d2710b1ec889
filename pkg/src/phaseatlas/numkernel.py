"""Dense complex Hermitian eigensolver and projector helpers.

The diagonalizer is a cyclic complex Jacobi method that works on stacks of
matrices at once: every matrix in a batch receives the same sequence of
(p, q) rotations in row-cyclic order, so results are reproducible bit for bit
on a given platform.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGroundState, NoConvergence, NotHermitian, ValidationError

HERMITIAN_TOL = 1e-12
GAP_TOL = 1e-8
MAX_SWEEPS = 60
_OFFDIAG_TOL = 1e-15


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigen-decomposition ``A = V diag(w) V*`` with ``w`` ascending.

    Attributes
    ----------
    eigenvalues : ndarray, (..., n)
    eigenvectors : ndarray, (..., n, n)
        Column ``i`` is the eigenvector of ``eigenvalues[..., i]``.
    sweeps : int
        Number of Jacobi sweeps the batch needed.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def as_complex_matrix(a):
    """Validate and return ``a`` as a complex array of square matrices."""
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2] or a.shape[-1] == 0:
        raise ValidationError(f"expected square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def max_norm(a):
    return np.max(np.abs(a), axis=(-2, -1))


def check_hermitian(a, tol=HERMITIAN_TOL):
    a = as_complex_matrix(a)
    scale = max_norm(a)
    dev = max_norm(a - np.conj(np.swapaxes(a, -1, -2)))
    bad = dev > tol * scale
    if np.any(bad):
        worst = float(np.max(np.where(bad, dev, 0.0)))
        raise NotHermitian(f"||A - A*||_max = {worst:.3e} exceeds {tol:g} * ||A||_max")
    return a


def _rotation(app, aqq, apq):
    """2x2 unitary block zeroing ``apq`` for each matrix in the batch."""
    r = np.abs(apq)
    nz = r > 0
    phase = np.where(nz, np.exp(1j * np.angle(apq)), 1.0)
    safe_r = np.where(nz, r, 1.0)
    with np.errstate(over="ignore"):
        theta = (aqq - app) / (2.0 * safe_r)
    sign = np.where(theta >= 0, 1.0, -1.0)
    t = np.where(nz, sign / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    g = np.empty(app.shape + (2, 2), dtype=complex)
    ph = np.conj(phase)
    g[..., 0, 0] = c
    g[..., 0, 1] = s
    g[..., 1, 0] = -s * ph
    g[..., 1, 1] = c * ph
    return g


def _offdiag_norm(a):
    off = a.copy()
    idx = np.arange(a.shape[-1])
    off[..., idx, idx] = 0.0
    return np.sqrt(np.sum(np.abs(off) ** 2, axis=(-2, -1)))


def eigh(a, max_sweeps=MAX_SWEEPS, check=True):
    """Diagonalize a Hermitian matrix or a stack of Hermitian matrices.

    Parameters
    ----------
    a : array_like, (..., n, n)
    max_sweeps : int
        Sweep budget; :class:`NoConvergence` is raised when it is exhausted.
    check : bool
        Verify Hermiticity first (:class:`NotHermitian` on failure).

    Returns
    -------
    HermitianSpectrum
    """
    a = check_hermitian(a) if check else as_complex_matrix(a)
    n = a.shape[-1]
    batch = a.shape[:-2]
    work = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    # power-of-two rescale to max-norm ~1: exact, and safe for subnormal input
    amax = max_norm(work)
    _, expo = np.frexp(np.where(amax > 0, amax, 1.0))
    work = np.ldexp(work.real, -expo[..., None, None]) + 1j * np.ldexp(work.imag, -expo[..., None, None])
    vecs = np.broadcast_to(np.eye(n, dtype=complex), work.shape).copy()
    scale = np.sqrt(np.sum(np.abs(work) ** 2, axis=(-2, -1)))
    target = _OFFDIAG_TOL * np.maximum(scale, np.finfo(float).tiny) * n

    sweeps = 0
    while True:
        off = _offdiag_norm(work)
        if np.all(off <= target):
            break
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                pq = [p, q]
                g = _rotation(work[..., p, p].real, work[..., q, q].real, work[..., p, q])
                gh = np.conj(np.swapaxes(g, -1, -2))
                work[..., :, pq] = work[..., :, pq] @ g
                work[..., pq, :] = gh @ work[..., pq, :]
                work[..., p, q] = 0.0
                work[..., q, p] = 0.0
                vecs[..., :, pq] = vecs[..., :, pq] @ g

    w = np.ldexp(np.real(np.diagonal(work, axis1=-2, axis2=-1)), expo[..., None])
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    vecs = np.take_along_axis(vecs, order[..., None, :], axis=-1)
    if batch == ():
        w, vecs = w.reshape(n), vecs.reshape(n, n)
    return HermitianSpectrum(w, vecs, sweeps)


def projector(v):
    """Rank-one projector ``v v*`` for a unit vector (or a stack of them)."""
    v = np.asarray(v, dtype=complex)
    return v[..., :, None] * np.conj(v[..., None, :])


def lowest_band_projector(a, gap_tol=GAP_TOL):
    """Projector onto the lowest eigenvector of ``a`` and the gap above it.

    Raises
    ------
    DegenerateGroundState
        If ``lambda_2 - lambda_1 <= gap_tol``.
    """
    a = as_complex_matrix(a)
    if a.ndim != 2:
        raise ValidationError("lowest_band_projector takes a single matrix")
    if a.shape[0] < 2:
        raise ValidationError("need at least a 2x2 matrix to define a gap")
    spectrum = eigh(a)
    gap = float(spectrum.eigenvalues[1] - spectrum.eigenvalues[0])
    if gap <= gap_tol:
        raise DegenerateGroundState(f"ground state gap {gap:.3e} <= {gap_tol:g}")
    return projector(spectrum.eigenvectors[:, 0]), gap


def is_rank_one_projector(p, tol=1e-10):
    p = np.asarray(p, dtype=complex)
    herm = np.max(np.abs(p - np.conj(np.swapaxes(p, -1, -2))), axis=(-2, -1))
    idem = np.max(np.abs(p @ p - p), axis=(-2, -1))
    tr = np.abs(np.trace(p, axis1=-2, axis2=-1) - 1.0)
    return (herm <= tol) & (idem <= tol) & (tr <= tol)
