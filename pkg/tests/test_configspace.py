import json

import numpy as np
import pytest

from phaseatlas import models
from phaseatlas.configspace import (
    GeneralConfiguration,
    ParameterGrid,
    admissibility_check,
    frames_close,
    from_hamiltonian,
    homotopy_interpolate,
    is_localizable,
    wrap_angle,
    wrap_positive,
)
from phaseatlas.errors import GapClosure, GridMismatch, MidpointDegeneracy, ValidationError
from phaseatlas.invariants import classify

from conftest import random_unit


def test_wrap_angle_branch():
    assert wrap_angle(np.pi) == np.pi
    assert wrap_angle(-np.pi) == np.pi
    assert wrap_angle(3 * np.pi / 2) == pytest.approx(-np.pi / 2)
    assert wrap_positive(-1e-18) < 2 * np.pi


def test_grid_minimum_size():
    with pytest.raises(ValidationError):
        ParameterGrid((3, 8))
    with pytest.raises(ValidationError):
        ParameterGrid((4, 4, 4, 4))


def test_grid_angles_row_major():
    g = ParameterGrid((4, 8))
    ang = g.angles()
    assert ang.shape == (4, 8, 2)
    assert ang[1, 3, 0] == pytest.approx(2 * np.pi / 4)
    assert ang[1, 3, 1] == pytest.approx(2 * np.pi * 3 / 8)


class TestLocalizable:
    def test_identity_section(self, rng):
        g = ParameterGrid.square(8)
        fiber = np.array([[random_unit(rng, 3) for _ in range(8)] for _ in range(8)])
        assert is_localizable(GeneralConfiguration.section(g, fiber))

    def test_constant_base(self):
        g = ParameterGrid((8,))
        F = GeneralConfiguration.constant(g)
        assert not is_localizable(F.with_base(np.zeros((8, 1))))

    def test_degree_two_selfmap(self):
        g = ParameterGrid((16,))
        F = models.torus_selfmap([[2]], g)
        assert not is_localizable(F)
        # the k = pi/2 point is sent to pi
        assert F.base[4, 0] == pytest.approx(np.pi)


class TestValidation:
    def test_non_unit_fiber(self):
        g = ParameterGrid.square(4)
        fiber = np.zeros((4, 4, 2), dtype=complex)
        fiber[..., 0] = 1.0
        fiber[1, 2, 0] = 1.1
        with pytest.raises(ValidationError, match=r"\(1, 2\)"):
            GeneralConfiguration.section(g, fiber)

    def test_base_range(self):
        g = ParameterGrid((4,))
        F = GeneralConfiguration.constant(g)
        with pytest.raises(ValidationError):
            F.with_base(np.full((4, 1), 2 * np.pi))


class TestFromHamiltonian:
    def test_constant(self):
        g = ParameterGrid.square(6)
        h = np.broadcast_to(np.diag([-1.0, 1.0]), (6, 6, 2, 2))
        F, gap = from_hamiltonian(h, g)
        assert gap == pytest.approx(2.0)
        assert np.allclose(np.abs(F.fiber[..., 0]), 1.0)
        assert is_localizable(F)

    def test_qwz_trivial_gap(self):
        # for m > 2 the smallest |d(k)| is m - 2, reached at (pi, pi)
        g = ParameterGrid.square(24)
        _, gap = from_hamiltonian(models.qwz(5.0, g), g)
        assert gap == pytest.approx(2 * (5.0 - 2), abs=1e-12)

    def test_gap_closure_location(self):
        g = ParameterGrid.square(24)
        with pytest.raises(GapClosure) as info:
            from_hamiltonian(models.qwz(2.0, g), g)
        assert info.value.k == (12, 12)

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatch):
            from_hamiltonian(np.zeros((4, 4, 2, 2)), ParameterGrid.square(6))


class TestAdmissibility:
    def test_constant(self):
        r = admissibility_check(GeneralConfiguration.constant(ParameterGrid.square(6)))
        assert (r.min_link, r.max_base_step, r.admissible) == (1.0, pytest.approx(2 * np.pi / 6), True)

    def test_qwz(self, grid24):
        assert admissibility_check(models.qwz_configuration(1.0, grid24)).admissible

    def test_alternating_fibers(self):
        g = ParameterGrid((8,))
        fiber = np.zeros((8, 2), dtype=complex)
        fiber[::2, 0] = 1
        fiber[1::2, 1] = 1
        r = admissibility_check(GeneralConfiguration.section(g, fiber))
        assert r.min_link == 0.0 and not r.admissible

    @pytest.mark.parametrize("m", [-3.0, -1.0, 0.75, 1.0, 3.0])
    def test_gapped_models_admissible(self, m):
        g = ParameterGrid.square(16)
        F, gap = from_hamiltonian(models.qwz(m, g), g)
        assert gap >= 0.5 and admissibility_check(F).admissible


class TestHomotopy:
    def test_same_endpoints_constant(self, grid24):
        F = models.qwz_configuration(1.0, grid24)
        phi = homotopy_interpolate(F, F, 4)
        assert frames_close(phi.frames, [F] * 5)

    def test_endpoints(self, grid24):
        F = models.qwz_configuration(1.0, grid24)
        G = models.qwz_configuration(1.5, grid24)
        phi = homotopy_interpolate(F, G, 6)
        assert phi.frames[0] is F and phi.frames[-1] is G

    def test_reverse_symmetry(self, grid24):
        F = models.qwz_configuration(0.5, grid24)
        G = models.qwz_configuration(1.5, grid24)
        fwd = homotopy_interpolate(F, G, 6)
        back = homotopy_interpolate(G, F, 6)
        assert frames_close(fwd.frames, back.frames[::-1], tol=1e-10)
        assert frames_close(fwd.reversed().frames, back.frames, tol=1e-10)

    def test_partial_overlap_constants(self):
        g = ParameterGrid.square(4)
        F = GeneralConfiguration.constant(g, vector=[1, 0])
        G = GeneralConfiguration.constant(g, vector=[1, 1])
        phi = homotopy_interpolate(F, G, 8)
        for fr in phi.frames:
            assert np.allclose(np.linalg.norm(fr.fiber, axis=-1), 1.0)

    def test_orthogonal_fibers_degenerate(self):
        g = ParameterGrid.square(4)
        F = GeneralConfiguration.constant(g, vector=[1, 0])
        G = GeneralConfiguration.constant(g, vector=[0, 1])
        with pytest.raises(MidpointDegeneracy) as info:
            homotopy_interpolate(F, G, 2)
        assert info.value.t == 0.5

    def test_frames_keep_class(self, grid24):
        F = models.qwz_configuration(0.4, grid24)
        G = models.qwz_configuration(1.6, grid24)
        classes = {classify(fr) for fr in homotopy_interpolate(F, G, 8).frames}
        assert len(classes) == 1

    def test_grid_mismatch(self, grid24):
        with pytest.raises(GridMismatch):
            homotopy_interpolate(models.qwz_configuration(1, grid24),
                                 models.qwz_configuration(1, ParameterGrid.square(12)), 2)


class TestJson:
    def test_round_trip_identity(self, grid24):
        F = models.qwz_configuration(1.0, grid24)
        data = json.loads(F.to_json())
        assert data["base_map"] == "identity"
        assert data["sizes"] == [24, 24] and data["n"] == 2 and data["d"] == 2
        G = GeneralConfiguration.from_json(F.to_json())
        assert np.array_equal(G.fiber, F.fiber) and np.array_equal(G.base, F.base)

    def test_round_trip_explicit_base(self):
        F = models.torus_selfmap([[2, 1], [0, 1]], ParameterGrid.square(24))
        data = json.loads(F.to_json())
        assert isinstance(data["base_map"], list)
        G = GeneralConfiguration.from_json(F.to_json())
        assert np.array_equal(G.base, F.base)

    def test_point_order(self):
        g = ParameterGrid((4, 5))
        fiber = np.zeros((4, 5, 2), dtype=complex)
        fiber[..., 0] = 1
        fiber[1, 3] = [0, 1j]
        data = json.loads(GeneralConfiguration.section(g, fiber).to_json())
        assert data["fiber"][1][3] == [[0.0, 0.0], [0.0, 1.0]]

    @pytest.mark.parametrize("bad", ['{"d": 2}', "not json", '{"d":1,"sizes":[4],"n":1,"base_map":"shift","fiber":[]}'])
    def test_malformed(self, bad):
        with pytest.raises(ValidationError):
            GeneralConfiguration.from_json(bad)
