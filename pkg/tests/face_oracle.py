"""Brute-force face enumeration, independent of quadembed.rotation.trace_faces.

Builds the full successor map over all 4|E| (arc, sign) states with naive
list scans, extracts orbits of that permutation, and pairs each orbit with
its mirror.  Kept deliberately separate from the library code path so the
two implementations can check each other.
"""

from __future__ import annotations

from quadembed.rotation import RotationSystem


def _naive_successor(rs: RotationSystem, arc: int, sign: int) -> tuple[int, int]:
    edge = arc // 2
    new_sign = sign * rs.signature[edge]
    u, v = rs.edges[edge]
    head = v if arc % 2 == 0 else u
    back = arc + 1 if arc % 2 == 0 else arc - 1
    rot = list(rs.rotations[head])
    idx = rot.index(back)
    step = 1 if new_sign == 1 else -1
    return rot[(idx + step) % len(rot)], new_sign


def brute_force_faces(rs: RotationSystem) -> list[list[tuple[int, int]]]:
    """All faces as state orbits, one representative per mirror pair."""
    all_states = [(a, s) for a in range(2 * len(rs.edges)) for s in (1, -1)]
    succ = {st: _naive_successor(rs, *st) for st in all_states}

    orbits: list[list[tuple[int, int]]] = []
    assigned: dict[tuple[int, int], int] = {}
    for st in all_states:
        if st in assigned:
            continue
        orbit = [st]
        assigned[st] = len(orbits)
        cur = succ[st]
        while cur != st:
            orbit.append(cur)
            assigned[cur] = len(orbits)
            cur = succ[cur]
        orbits.append(orbit)

    # Pair orbits with their mirrors; report the one holding the least state.
    # The mirror of (a, s) is (reverse(a), -s * signature(edge(a))).
    faces = []
    reported = set()
    for k, orbit in enumerate(orbits):
        if k in reported:
            continue
        arc0, sign0 = orbit[0]
        mirror_id = assigned[(arc0 ^ 1, -sign0 * rs.signature[arc0 // 2])]
        assert mirror_id != k, "self-mirror orbit: face model violated"
        reported.add(k)
        reported.add(mirror_id)
        faces.append(orbit)
    return faces


def brute_force_face_lengths(rs: RotationSystem) -> list[int]:
    return sorted(len(face) for face in brute_force_faces(rs))
