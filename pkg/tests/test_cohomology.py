import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phaseatlas.cohomology import (
    AbelianGroup,
    CWComplex,
    IntMatrix,
    cohomology,
    cohomology_group,
    determinant,
    elementary_divisors,
    format_cw,
    load_cw,
    parse_cw,
    reduced_k0,
    smith_normal_form,
    sphere_cw,
    torus_cw,
)
from phaseatlas.errors import CochainViolation, DegreeOutOfRange, DimensionTooHigh, ParseError

from cohomology_oracle import invariant_factors, random_complex


def check_snf(A):
    U, D, V = smith_normal_form(A)
    assert (U @ A @ V).entries == D.entries
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = D.diagonal()
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j:
                assert D.entries[i][j] == 0
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert diag[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return nz


class TestSmith:
    def test_small(self):
        assert elementary_divisors(IntMatrix.from_rows([[2, 4], [6, 8]])) == [2, 4]

    def test_coprime_diagonal(self):
        assert elementary_divisors(IntMatrix.from_rows([[2, 0], [0, 3]])) == [1, 6]

    def test_zero_and_empty(self):
        assert elementary_divisors(IntMatrix.zeros(3, 2)) == []
        assert elementary_divisors(IntMatrix.zeros(0, 4)) == []

    def test_big_entries_exact(self):
        A = IntMatrix.from_rows([[10**30, 3], [7, 2 * 10**30 + 1]])
        nz = check_snf(A)
        assert nz[0] * nz[1] == abs(determinant(A))

    def test_determinant(self):
        A = IntMatrix.from_rows([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
        assert determinant(A) == 4
        assert determinant(IntMatrix.from_rows([[0, 1], [1, 0]])) == -1

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 6), st.data())
    def test_property(self, m, n, data):
        rows = data.draw(st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m))
        A = IntMatrix.from_rows(rows)
        nz = check_snf(A)
        assert len(nz) == np.linalg.matrix_rank(np.array(rows, dtype=float))
        if m == n:
            prod = 1
            for x in nz:
                prod *= x
            assert (prod if len(nz) == n else 0) == abs(determinant(A))


class TestCohomologyGroups:
    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_torus(self, d):
        from math import comb
        groups = cohomology(torus_cw(d))
        assert [g.free_rank for g in groups] == [comb(d, k) for k in range(d + 1)]
        assert all(g.torsion == () for g in groups)

    def test_torus_degree_two_values(self):
        assert [cohomology_group(torus_cw(d), 2).free_rank for d in (1, 2, 3, 4)] == [0, 1, 3, 6]

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_sphere(self, n):
        groups = cohomology(sphere_cw(n))
        assert [g.free_rank for g in groups] == [1] + [0] * (n - 1) + [1]

    def test_projective_plane(self):
        X = parse_cw("cw dim=2\ncells k=0 n=1\ncells k=1 n=1\ncells k=2 n=1\ncoboundary k=1\n2\n")
        assert [str(g) for g in cohomology(X)] == ["Z", "0", "Z/2"]

    def test_klein_bottle(self):
        X = parse_cw("cw dim=2\ncells k=0 n=1\ncells k=1 n=2\ncells k=2 n=1\ncoboundary k=1\n2 0\n")
        assert [str(g) for g in cohomology(X)] == ["Z", "Z", "Z/2"]

    def test_degree_range(self):
        with pytest.raises(DegreeOutOfRange):
            cohomology_group(torus_cw(2), -1)
        assert cohomology_group(torus_cw(2), 7) == AbelianGroup(0)

    def test_reduced_k0(self):
        assert reduced_k0(torus_cw(2)) == AbelianGroup(1)
        assert reduced_k0(torus_cw(3)) == AbelianGroup(3)
        assert reduced_k0(sphere_cw(2)) == AbelianGroup(1)
        with pytest.raises(DimensionTooHigh):
            reduced_k0(torus_cw(4))

    def test_group_string(self):
        assert str(AbelianGroup(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
        with pytest.raises(ValueError):
            AbelianGroup(0, (2, 3))

    def test_random_against_construction(self, rng):
        for _ in range(40):
            X, free, torsion = random_complex(rng, int(rng.integers(1, 4)))
            for k, G in enumerate(cohomology(X)):
                assert G.free_rank == free[k]
                assert list(G.torsion) == invariant_factors(torsion[k])

    def test_euler_characteristic(self, rng):
        for _ in range(30):
            X, _, _ = random_complex(rng, int(rng.integers(1, 4)))
            assert sum((-1) ** k * g.free_rank for k, g in enumerate(cohomology(X))) == X.euler_characteristic()


class TestTextFormat:
    def test_round_trip(self, rng):
        for _ in range(10):
            X, _, _ = random_complex(rng, 3)
            assert parse_cw(format_cw(X)) == X

    def test_load_shorthand(self, tmp_path):
        assert load_cw("torus:3") == torus_cw(3)
        assert load_cw("sphere:2") == sphere_cw(2)
        p = tmp_path / "x.cw"
        p.write_text(format_cw(torus_cw(2)))
        assert load_cw(str(p)) == torus_cw(2)

    def test_comments(self):
        X = parse_cw("# circle\ncw dim=1\ncells k=0 n=1  # one vertex\ncells k=1 n=1\n")
        assert X == sphere_cw(1)

    @pytest.mark.parametrize("text,line", [
        ("", 0),
        ("cw dim=x", 1),
        ("cw dim=1\ncells k=0 n=1", 2),
        ("cw dim=1\ncells k=0 n=1\ncells k=1 n=2\ncoboundary k=0\n1\nfoo", 6),
        ("cw dim=1\ncells k=0 n=1\ncells k=1 n=1\ncoboundary k=0\n1 2", 5),
        ("cw dim=1\ncells k=0 n=1\ncells k=0 n=1", 3),
    ])
    def test_parse_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_cw(text)
        assert info.value.line == line

    def test_cochain_violation(self):
        text = ("cw dim=2\ncells k=0 n=1\ncells k=1 n=1\ncells k=2 n=1\n"
                "coboundary k=0\n1\ncoboundary k=1\n1\n")
        with pytest.raises(CochainViolation) as info:
            parse_cw(text)
        assert info.value.k == 0

    def test_cochain_violation_direct(self):
        one = IntMatrix.from_rows([[1]])
        with pytest.raises(CochainViolation):
            CWComplex((1, 1, 1), (one, one))
