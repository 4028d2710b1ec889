import numpy as np
import pytest

from phaseatlas import models
from phaseatlas.configspace import ParameterGrid, from_hamiltonian, is_localizable
from phaseatlas.errors import GapClosure, GridTooCoarse, NotCoprime
from phaseatlas.invariants import chern_vector, classify


def test_qwz_at_origin():
    g = ParameterGrid.square(8)
    np.testing.assert_allclose(models.qwz(0.3, g)[0, 0], 2.3 * models.SIGMA_3, atol=1e-15)


@pytest.mark.parametrize("m,k", [(-2.0, (0, 0)), (0.0, (12, 0)), (2.0, (12, 12))])
def test_qwz_gap_closures(grid24, m, k):
    h = models.qwz(m, grid24)
    assert np.max(np.abs(h[k])) < 1e-15
    with pytest.raises(GapClosure):
        from_hamiltonian(h, grid24)


def test_qwz_hermitian(grid24):
    h = models.qwz(0.7, grid24)
    assert np.allclose(h, np.conj(np.swapaxes(h, -1, -2)))


class TestHofstadter:
    def test_q2_origin(self):
        h = models.hofstadter(1, 2, ParameterGrid.square(8))
        np.testing.assert_allclose(h[0, 0], [[2, 2], [2, -2]], atol=1e-14)

    def test_not_coprime(self):
        with pytest.raises(NotCoprime):
            models.hofstadter(2, 4, ParameterGrid.square(8))

    def test_hermitian(self, grid24):
        h = models.hofstadter(2, 5, grid24)
        assert np.allclose(h, np.conj(np.swapaxes(h, -1, -2)))

    def test_q2_dirac_points(self, grid24):
        # flux 1/2: the two bands touch where cos ky = 0 and q kx = pi
        h = models.hofstadter(1, 2, grid24)
        assert np.max(np.abs(h[12, 6])) < 1e-15
        with pytest.raises(GapClosure):
            from_hamiltonian(h, grid24)

    @pytest.mark.parametrize("p,q", [(1, 3), (2, 3), (1, 5), (2, 5), (3, 7), (1, 4), (3, 8)])
    def test_band_cherns_sum_to_zero(self, p, q):
        g = ParameterGrid.square(24 if q <= 5 else 32)
        try:
            bands = models.hofstadter_bands(p, q, g)
        except GapClosure:
            pytest.skip("even-q Harper bands touch at the centre of the spectrum")
        assert sum(chern_vector(b)[0] for b in bands) == 0

    @pytest.mark.parametrize("p,q", [(1, 3), (2, 3), (1, 5), (2, 5), (3, 7)])
    def test_lowest_band_tknn(self, p, q):
        g = ParameterGrid.square(24 if q <= 5 else 32)
        F, _ = from_hamiltonian(models.hofstadter(p, q, g), g)
        t = models.tknn_solution(p, q)
        assert chern_vector(F)[0] == -t


@pytest.mark.parametrize("p,q,t", [(1, 3, 1), (2, 5, -2), (1, 2, 1), (2, 3, -1), (3, 7, -2)])
def test_tknn_solution(p, q, t):
    assert models.tknn_solution(p, q) == t
    assert (1 - p * t) % q == 0


class TestSphereWrap:
    @pytest.mark.parametrize("c", [-2, -1, 0, 1, 2])
    def test_chern(self, c):
        F = models.sphere_wrap(c, ParameterGrid.square(24))
        assert is_localizable(F)
        assert chern_vector(F) == (c,)

    def test_sign_matches_qwz(self, grid24):
        assert chern_vector(models.sphere_wrap(1, grid24)) == chern_vector(models.qwz_configuration(1.0, grid24))

    def test_too_coarse(self):
        with pytest.raises(GridTooCoarse):
            models.sphere_wrap(2, ParameterGrid.square(16))


class TestSelfmap:
    def test_identity(self):
        F = models.torus_selfmap(np.eye(2, dtype=int), ParameterGrid.square(8))
        assert is_localizable(F)
        assert classify(F).chern == (0,)

    def test_zero(self):
        F = models.torus_selfmap(np.zeros((2, 2), dtype=int), ParameterGrid.square(8))
        assert np.all(F.base == 0)
        assert classify(F).degree == ((0, 0), (0, 0))

    def test_too_coarse(self):
        with pytest.raises(GridTooCoarse):
            models.torus_selfmap([[3, 1], [0, 1]], ParameterGrid.square(24))


@pytest.mark.parametrize("lo,hi,expected", [(-5, -2, 0), (-2, 0, -1), (0, 2, 1), (2, 5, 0)])
def test_qwz_constant_on_windows(grid24, lo, hi, expected):
    for m in np.linspace(lo, hi, 7)[1:-1]:
        assert chern_vector(models.qwz_configuration(m, grid24)) == (expected,)
