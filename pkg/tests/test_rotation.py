"""Core rotation-system behavior: tracing, invariants, flips, separation."""

import pytest

from quadembed.cyclic import cyclic_equal, cyclic_equal_up_to_reversal, rotate_to_least
from quadembed.rotation import (
    InvalidRotationSystem,
    RotationSystem,
    SurfaceClass,
    euler_characteristic,
    face_length_multiset,
    is_orientable,
    is_quadrangular,
    normalize_at,
    odd_separated,
    separation_counts,
    surface_of,
    trace_faces,
    vertex_flip,
)

from face_oracle import brute_force_face_lengths


def c4(twisted=()):
    """The 4-cycle 0-1-2-3 with planar rotations."""
    return RotationSystem.from_neighbors(
        {0: (1, 3), 1: (2, 0), 2: (3, 1), 3: (0, 2)}, twisted=twisted
    )


def one_loop(sign):
    return RotationSystem(
        edges=((0, 0),), rotations={0: (0, 1)}, signature=(sign,)
    )


class TestValidate:
    def test_c4_valid(self):
        c4().validate()

    def test_dangling_arc(self):
        rs = c4()
        bad = dict(rs.rotations)
        bad[0], bad[1] = bad[1], bad[0]
        broken = RotationSystem(edges=rs.edges, rotations=bad, signature=rs.signature)
        with pytest.raises(InvalidRotationSystem, match="dangling arc"):
            broken.validate()

    def test_duplicate_arc(self):
        rs = c4()
        bad = dict(rs.rotations)
        bad[0] = (bad[0][0], bad[0][0])
        broken = RotationSystem(edges=rs.edges, rotations=bad, signature=rs.signature)
        with pytest.raises(InvalidRotationSystem, match="twice"):
            broken.validate()

    def test_missing_arc(self):
        rs = c4()
        bad = dict(rs.rotations)
        bad[0] = (bad[0][0],)
        broken = RotationSystem(edges=rs.edges, rotations=bad, signature=rs.signature)
        with pytest.raises(InvalidRotationSystem, match="no rotation"):
            broken.validate()

    def test_missing_signature(self):
        rs = c4()
        broken = RotationSystem(edges=rs.edges, rotations=rs.rotations, signature=(1, 1))
        with pytest.raises(InvalidRotationSystem, match="signature"):
            broken.validate()

    def test_k36_proposition_rotations(self):
        # White rotations as printed for K_{3,6}; black rotations any fixed cycle.
        whites = {7: (1, 2, 6, 5, 3, 4), 8: (1, 6, 2, 3, 5, 4), 9: (1, 2, 3, 4, 5, 6)}
        blacks = {b: (7, 8, 9) for b in range(1, 7)}
        rs = RotationSystem.from_neighbors({**whites, **blacks})
        rs.validate()
        assert rs.degree(9) == 6 and rs.degree(1) == 3


class TestTraceFaces:
    def test_c4_sphere(self):
        faces = trace_faces(c4())
        assert sorted(len(f) for f in faces) == [4, 4]
        assert euler_characteristic(c4()) == 2

    def test_c4_one_twist_projective(self):
        rs = c4(twisted=[(0, 1)])
        faces = trace_faces(rs)
        assert [len(f) for f in faces] == [8]
        assert euler_characteristic(rs) == 1
        assert surface_of(rs) == SurfaceClass(orientable=False, genus=1)

    def test_face_lengths_sum_to_twice_edges(self):
        for rs in (c4(), c4(twisted=[(1, 2)]), one_loop(1), one_loop(-1)):
            assert sum(len(f) for f in trace_faces(rs)) == 2 * len(rs.edges)

    def test_arc_coverage_both_directions(self):
        rs = c4(twisted=[(2, 3)])
        counts = {a: 0 for a in range(2 * len(rs.edges))}
        for face in trace_faces(rs):
            for arc, _ in face.states:
                counts[arc] += 1
                counts[arc ^ 1] += 1
        assert all(c == 2 for c in counts.values())

    def test_matches_brute_force_oracle(self):
        for rs in (c4(), c4(twisted=[(0, 1)]), c4(twisted=[(0, 1), (2, 3)]), one_loop(-1)):
            assert sorted(len(f) for f in trace_faces(rs)) == brute_force_face_lengths(rs)

    def test_loop_faces(self):
        # Untwisted loop on the sphere: two monogons.  Twisted loop: N_1.
        assert face_length_multiset(one_loop(1)) == (1, 1)
        assert euler_characteristic(one_loop(1)) == 2
        assert face_length_multiset(one_loop(-1)) == (2,)
        assert surface_of(one_loop(-1)) == SurfaceClass(orientable=False, genus=1)


class TestOrientability:
    def test_all_positive(self):
        assert is_orientable(c4())

    def test_one_twist(self):
        assert not is_orientable(c4(twisted=[(0, 1)]))

    def test_two_twists_even_cycle(self):
        assert is_orientable(c4(twisted=[(0, 1), (2, 3)]))

    def test_twisted_loop(self):
        assert not is_orientable(one_loop(-1))


class TestQuadrangular:
    def test_c4_sphere_is_quadrangular(self):
        assert is_quadrangular(c4())

    def test_k2_is_not(self):
        k2 = RotationSystem.from_neighbors({0: (1,), 1: (0,)})
        assert face_length_multiset(k2) == (2,)
        assert not is_quadrangular(k2)


class TestVertexFlip:
    def test_involution(self):
        rs = c4(twisted=[(0, 1)])
        assert vertex_flip(vertex_flip(rs, 2), 2) == rs

    def test_preserves_surface_on_projective_c4(self):
        rs = c4(twisted=[(0, 1)])
        for v in rs.vertices:
            flipped = vertex_flip(rs, v)
            assert face_length_multiset(flipped) == (8,)
            assert not is_orientable(flipped)

    def test_preserves_face_multiset_and_chi(self):
        rs = c4(twisted=[(1, 2), (2, 3)])
        for v in rs.vertices:
            flipped = vertex_flip(rs, v)
            assert face_length_multiset(flipped) == face_length_multiset(rs)
            assert euler_characteristic(flipped) == euler_characteristic(rs)
            assert is_orientable(flipped) == is_orientable(rs)

    def test_loop_signature_unchanged(self):
        rs = one_loop(-1)
        assert vertex_flip(rs, 0).signature == rs.signature


class TestNormalizeAt:
    def test_identity_when_clean(self):
        rs = c4()
        assert normalize_at(rs, 0) == rs

    def test_migrates_twist(self):
        rs = c4(twisted=[(0, 1)])
        cleaned = normalize_at(rs, 0)
        assert all(cleaned.signature[a >> 1] == 1 for a in cleaned.rotations[0])
        assert face_length_multiset(cleaned) == (8,)
        assert surface_of(cleaned) == SurfaceClass(orientable=False, genus=1)

    def test_loop_rejected(self):
        with pytest.raises(InvalidRotationSystem, match="loop"):
            normalize_at(one_loop(-1), 0)


class TestSeparation:
    def test_proposition5_rotation_a(self):
        # (1 2 6 5 3 4): between 1 and 3 sit 2, 6, 5.
        assert separation_counts((1, 2, 6, 5, 3, 4), 1, 3) == (3, 1)
        assert odd_separated((1, 2, 6, 5, 3, 4), 1, 3)

    def test_proposition5_rotation_c(self):
        assert separation_counts((1, 2, 3, 4, 5, 6), 4, 6) == (1, 3)
        assert odd_separated((1, 2, 3, 4, 5, 6), 4, 6)

    def test_antipodal_in_c4_order(self):
        assert separation_counts((1, 2, 3, 4), 1, 3) == (1, 1)
        assert odd_separated((1, 2, 3, 4), 1, 3)

    def test_parity_well_defined(self):
        rot = (1, 2, 6, 5, 3, 4)
        for i in rot:
            for j in rot:
                if i != j:
                    p, q = separation_counts(rot, i, j)
                    assert p % 2 == q % 2
                    assert p + q == len(rot) - 2

    def test_errors(self):
        with pytest.raises(ValueError, match="odd-length"):
            separation_counts((1, 2, 3), 1, 2)
        with pytest.raises(ValueError, match="exactly once"):
            separation_counts((1, 2, 3, 4), 1, 5)
        with pytest.raises(ValueError, match="distinct"):
            separation_counts((1, 2, 3, 4), 2, 2)

    def test_reversal_swaps_counts(self):
        rot = (1, 2, 8, 7, 3, 4, 6, 5)
        p, q = separation_counts(rot, 2, 4)
        assert separation_counts(tuple(reversed(rot)), 2, 4) == (q, p)


class TestCyclicHelpers:
    def test_cyclic_equal(self):
        assert cyclic_equal((1, 2, 3), (3, 1, 2))
        assert not cyclic_equal((1, 2, 3), (1, 3, 2))

    def test_up_to_reversal(self):
        assert cyclic_equal_up_to_reversal((1, 2, 3), (1, 3, 2))

    def test_rotate_to_least(self):
        assert rotate_to_least((3, 1, 2)) == (1, 2, 3)
