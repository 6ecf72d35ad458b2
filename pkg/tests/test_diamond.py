"""Diamond sum surgery: bookkeeping, face survival, shifts, Observation-7 checks."""

import pytest

from quadembed.diamond import (
    DiamondError,
    check_observation7,
    diamond_sum,
    faces_at,
    merge_map_for_shift,
    valid_shifts,
)
from quadembed.rotation import (
    RotationSystem,
    euler_characteristic,
    face_length_multiset,
    is_orientable,
    trace_faces,
)


def cycle(n, twisted=()):
    rot = {i: ((i - 1) % n, (i + 1) % n) for i in range(n)}
    return RotationSystem.from_neighbors(rot, twisted=twisted)


def planar_k4():
    """Tetrahedron on the sphere: triangle 1,2,3 with 0 inside."""
    return RotationSystem.from_neighbors(
        {0: (1, 2, 3), 1: (2, 0, 3), 2: (3, 0, 1), 3: (1, 0, 2)}
    )


def star_k13():
    return RotationSystem.from_neighbors(
        {0: (1, 2, 3), 1: (0,), 2: (0,), 3: (0,)}
    )


class TestPreconditions:
    def test_planar_k4_is_a_sphere(self):
        assert euler_characteristic(planar_k4()) == 2
        assert face_length_multiset(planar_k4()) == (3, 3, 3, 3)

    def test_degree_mismatch(self):
        with pytest.raises(DiamondError, match="degree mismatch"):
            diamond_sum(cycle(3), 0, planar_k4(), 0)

    def test_star_centers_rejected_as_noncellular(self):
        # Excising the centers of two stars would leave isolated points; the
        # single face of the star holds all three corners at the center.
        with pytest.raises(DiamondError, match="cellular"):
            diamond_sum(star_k13(), 0, star_k13(), 0)

    def test_loop_at_excised_vertex(self):
        rs = RotationSystem(edges=((0, 0),), rotations={0: (0, 1)}, signature=(1,))
        with pytest.raises(DiamondError, match="loop"):
            diamond_sum(rs, 0, rs, 0)


class TestChiAdditivity:
    def test_smallest_nondegenerate_case(self):
        # C3 excised at a degree-2 vertex twice: the result is a digon on
        # the sphere; chi = 2 + 2 - 2.
        res = diamond_sum(cycle(3), 0, cycle(3), 0)
        assert len(res.system.rotations) == 2
        assert len(res.system.edges) == 2
        assert euler_characteristic(res.system) == 2

    def test_two_spheres_make_a_sphere(self):
        res = diamond_sum(planar_k4(), 3, planar_k4(), 3)
        # Doubled triangle on 3 vertices: V=3, E=6, F=5.
        assert len(res.system.rotations) == 3
        assert len(res.system.edges) == 6
        assert len(trace_faces(res.system)) == 5
        assert euler_characteristic(res.system) == 2
        assert is_orientable(res.system)

    def test_nonorientable_input_propagates(self):
        proj = cycle(4, twisted=[(0, 1)])  # N_1, one face of length 8
        # One face holds two corners at every vertex of the projective C4,
        # so it cannot be excised; use it as the *second* summand at a
        # clean vertex of a planar C4 instead ... the same obstruction
        # applies symmetrically, so this pairing must be rejected.
        with pytest.raises(DiamondError, match="cellular"):
            diamond_sum(cycle(4), 0, proj, 0)

    def test_chi_additivity_cycles(self):
        for n, m in [(3, 4), (4, 4), (5, 3), (6, 5)]:
            res = diamond_sum(cycle(n), 0, cycle(m), 0)
            assert euler_characteristic(res.system) == 2
            assert len(trace_faces(res.system)) == 2 + 2 - 2


class TestFaceSurvival:
    def test_untouched_face_survives_identically(self):
        before = planar_k4()
        surviving = [f for f in trace_faces(before) if not f.visits(3)]
        assert len(surviving) == 1
        res = diamond_sum(before, 3, planar_k4(), 3)
        after_walks = [set(zip(f.vertices, f.vertices[1:] + f.vertices[:1]))
                       for f in trace_faces(res.system)]
        old = surviving[0]
        old_walk = set(zip(old.vertices, old.vertices[1:] + old.vertices[:1]))
        assert any(old_walk == w or old_walk == {(b, a) for a, b in w}
                   for w in after_walks)

    def test_new_faces_pair_sides(self):
        res = diamond_sum(planar_k4(), 3, planar_k4(), 3)
        # d = 3 new faces, each combining a length-3 face minus its two
        # corner arcs from each side: 1 + 1 = digons; plus the two
        # surviving triangles.
        assert sorted(len(f) for f in trace_faces(res.system)) == [2, 2, 2, 3, 3]


class TestShifts:
    def test_all_shifts_valid_without_unsaturation(self):
        shifts = valid_shifts(planar_k4(), 3, planar_k4(), 3)
        assert [t for t, _ in shifts] == [0, 1, 2]

    def test_merge_map_structure(self):
        merge = merge_map_for_shift(planar_k4(), 3, planar_k4(), 3, 0)
        seconds = sorted(b for b, _ in merge)
        firsts = sorted(a for _, a in merge)
        assert seconds == [0, 1, 2] and firsts == [0, 1, 2]

    def test_unsaturated_pairs_filtered(self):
        phi, phi2 = planar_k4(), planar_k4()
        all_shifts = valid_shifts(phi, 3, phi2, 3)
        blocked = valid_shifts(phi, 3, phi2, 3, {0, 1, 2}, {0, 1, 2})
        assert blocked == []
        partial = valid_shifts(phi, 3, phi2, 3, {0}, {1})
        banned = {t for t, merge in all_shifts if (1, 0) in merge}
        assert {t for t, _ in partial} == {t for t, _ in all_shifts} - banned

    def test_excised_vertex_must_be_saturated(self):
        with pytest.raises(DiamondError, match="unsaturated"):
            valid_shifts(planar_k4(), 3, planar_k4(), 3, {3}, set())


class TestObservation7:
    def test_identity_mapping_trivial(self):
        rs = planar_k4()
        assert check_observation7(rs, rs, excised=-1, tracked={0, 1, 2, 3})

    def test_flipped_rotation_still_passes(self):
        from quadembed.rotation import vertex_flip

        rs = planar_k4()
        assert check_observation7(rs, vertex_flip(rs, 2), excised=-1)

    def test_detects_rewired_rotation(self):
        # Degree 4 is the smallest where a reordering is not just a
        # reversal: (1,2,3,4) vs (1,3,2,4).
        star = RotationSystem.from_neighbors(
            {0: (1, 2, 3, 4), 1: (0,), 2: (0,), 3: (0,), 4: (0,)}
        )
        rewired = RotationSystem.from_neighbors(
            {0: (1, 3, 2, 4), 1: (0,), 2: (0,), 3: (0,), 4: (0,)}
        )
        assert not check_observation7(star, rewired, excised=-1, tracked={0})


class TestFacesAt:
    def test_corners_of_planar_k4(self):
        rs = planar_k4()
        corner_faces = faces_at(rs, 3)
        assert len(corner_faces) == 3
        assert len({f.states for f in corner_faces}) == 3
        for f in corner_faces:
            assert f.visits(3)
