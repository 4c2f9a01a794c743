import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poset_forge.chains import (
    FinAbGroup,
    IntMatrix,
    OrderComplex,
    boundary_matrix,
    homology,
    homology_all,
    invariant_factors,
    smith_normal_form,
)
from poset_forge.errors import DegreeOutOfRange
from poset_forge.poset import Poset, all_posets, parse_poset

from conftest import crown
from oracles import betti_numbers, chains_of_length

# Face poset of the six-vertex real projective plane
RP2_TRIANGLES = ["123", "134", "145", "156", "162", "235", "346", "452", "563", "624"]


def face_poset(triangles):
    faces = set()
    for t in triangles:
        t = "".join(sorted(t))
        faces |= {t, t[:2], t[1:], t[0] + t[2], *t}
    faces = sorted(faces, key=lambda f: (len(f), f))
    rel = [(a, b) for a in faces for b in faces if a != b and set(a) <= set(b)]
    return Poset.from_relations(["v" + f for f in faces], [("v" + a, "v" + b) for a, b in rel])


class TestSmithForm:
    def test_small(self):
        M = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        U, S, V = smith_normal_form(M)
        assert S.diagonal() == [2, 6, 12]
        assert U @ M @ V == S
        assert abs(U.determinant()) == 1 and abs(V.determinant()) == 1

    def test_zero_and_empty(self):
        assert invariant_factors(IntMatrix.zeros(2, 3)) == []
        U, S, V = smith_normal_form(IntMatrix.zeros(0, 0))
        assert S.rows == 0

    def test_big_entries(self):
        big = 2**70
        M = IntMatrix.from_rows([[big, 0], [0, big * 3]])
        assert invariant_factors(M) == [big, 3 * big]


@st.composite
def int_matrices(draw):
    m = draw(st.integers(0, 5))
    n = draw(st.integers(0, 5))
    rows = [[draw(st.integers(-20, 20)) for _ in range(n)] for _ in range(m)]
    return IntMatrix.from_rows(rows, n)


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_snf_properties(M):
    U, S, V = smith_normal_form(M)
    assert U @ M @ V == S
    assert abs(U.determinant()) == 1 and abs(V.determinant()) == 1
    d = S.diagonal()
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert d[: len(nz)] == nz  # zeros trail
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    for i in range(S.rows):
        for j in range(S.cols):
            if i != j:
                assert S[i, j] == 0


class TestHomology:
    def test_crown_circle(self, crown4):
        assert str(homology(crown4, 0)) == "Z"
        assert str(homology(crown4, 1)) == "Z"

    def test_sphere(self, sphere):
        K = OrderComplex(sphere)
        assert K.count(2) == 8
        assert [str(g) for g in homology_all(sphere)] == ["Z", "0", "Z"]

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_crown_family(self, n):
        assert homology(crown(n), 1) == FinAbGroup(n - 1)

    def test_projective_plane_torsion(self):
        P = face_poset(RP2_TRIANGLES)
        K = OrderComplex(P)
        assert K.euler_characteristic() == 1
        assert [str(g) for g in homology_all(P)] == ["Z", "Z/2", "0"]

    def test_above_top_degree(self, chain3):
        assert homology(chain3, 7).is_trivial()

    def test_boundary_range(self, chain3):
        K = OrderComplex(chain3)
        with pytest.raises(DegreeOutOfRange):
            boundary_matrix(K, 0)
        with pytest.raises(DegreeOutOfRange):
            boundary_matrix(K, 3)

    def test_boundary_squared(self, sphere):
        K = OrderComplex(sphere)
        assert (boundary_matrix(K, 1) @ boundary_matrix(K, 2)).is_zero()

    def test_chains_match_oracle(self, sphere):
        K = OrderComplex(sphere)
        for k in range(3):
            assert list(K.simplices(k)) == chains_of_length(sphere, k)

    def test_betti_numbers_against_sympy(self):
        for n in range(1, 6):
            for P in all_posets(n):
                groups = homology_all(P)
                assert [g.free_rank for g in groups] == betti_numbers(P)

    def test_disconnected(self):
        assert homology(Poset.antichain(3), 0) == FinAbGroup(3)


class TestGroups:
    def test_from_cyclic(self):
        assert FinAbGroup.from_cyclic(0, [2, 5]) == FinAbGroup(0, (10,))
        assert FinAbGroup.from_cyclic(1, [4, 6]) == FinAbGroup(1, (2, 12))

    def test_str(self):
        assert str(FinAbGroup(2, (2,))) == "Z^2 + Z/2"
        assert str(FinAbGroup(0)) == "0"

    def test_invalid(self):
        with pytest.raises(ValueError):
            FinAbGroup(0, (2, 3))
