"""Bouchet's diamond sum on rotation systems.

The surgery excises a degree-d vertex from each of two embeddings and glues
the boundary circles anti-parallel: writing the first rotation as
(u_1 .. u_d) and the second, reversed, as (u'_1 .. u'_d), shift t merges
u_i with u'_{i+t}.  Each merged vertex splices the second neighborhood into
the first in place of the deleted spoke.  Faces not at the excised vertices
survive unchanged; the 2d destroyed faces are replaced by d faces pairing
one face from each side, so F = F1 + F2 - d and chi = chi1 + chi2 - 2.
"""

from __future__ import annotations

from dataclasses import dataclass

from quadembed.cyclic import cyclic_equal_up_to_reversal, rotate_to
from quadembed.rotation import FaceWalk, RotationSystem, normalize_at, trace_faces


class DiamondError(ValueError):
    """The requested diamond sum is not well-defined on these inputs."""


@dataclass(frozen=True)
class GluingPlan:
    """One way of merging the two excised neighborhoods."""

    excised: tuple[int, int]
    degree: int
    shift: int
    merge_map: tuple[tuple[int, int], ...]  # (second-system vertex, first-system vertex)


@dataclass(frozen=True)
class DiamondResult:
    system: RotationSystem
    plan: GluingPlan
    vertex_map: dict[int, int]  # second-system vertex -> result vertex


def _frame(rs: RotationSystem, v: int, reverse: bool) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Arcs and neighbor ids at v, linearized to start at the least neighbor."""
    arcs = rs.rotations[v]
    if reverse:
        arcs = tuple(reversed(arcs))
    nbrs = tuple(rs.arc_head(a) for a in arcs)
    i = nbrs.index(min(nbrs))
    return rotate_to(arcs, i), rotate_to(nbrs, i)


def faces_at(rs: RotationSystem, v: int) -> list[FaceWalk]:
    """The face at each corner of v, indexed like v's rotation.

    Corner i lies between spoke positions i and i+1 of v's rotation; it is
    exited either by state (rot[i+1], +1) or, in the mirror direction, by
    (rot[i], -1), and exactly one of the two appears among the reported
    face representatives.
    """
    rot = rs.rotations[v]
    pos = {arc: i for i, arc in enumerate(rot)}
    d = len(rot)
    corner_face: list[FaceWalk | None] = [None] * d
    for face in trace_faces(rs):
        for arc, sign in face.states:
            if rs.arc_tail(arc) != v:
                continue
            corner = (pos[arc] - 1) % d if sign == 1 else pos[arc]
            assert corner_face[corner] is None, "corner covered twice"
            corner_face[corner] = face
    assert all(f is not None for f in corner_face)
    return corner_face  # type: ignore[return-value]


def _check_excisable(rs: RotationSystem, v: int) -> None:
    if v not in rs.rotations:
        raise DiamondError(f"unknown vertex {v}")
    nbrs = rs.neighbors(v)
    if v in nbrs:
        raise DiamondError(f"loop at excised vertex {v}")
    if len(set(nbrs)) != len(nbrs):
        raise DiamondError(f"multi-edge at excised vertex {v}")
    if not rs.is_connected():
        raise DiamondError("diamond sum requires connected systems")
    corner_faces = faces_at(rs, v)
    if len({f.states for f in corner_faces}) != len(corner_faces):
        raise DiamondError(
            f"vertex {v} has two corners on one face; the surgery would not be cellular"
        )


def merge_map_for_shift(
    phi: RotationSystem, v: int, phi2: RotationSystem, v2: int, shift: int
) -> tuple[tuple[int, int], ...]:
    """Pairs (vertex of phi2, vertex of phi) merged under the given shift."""
    _, nbrs = _frame(phi, v, reverse=False)
    _, nbrs2 = _frame(phi2, v2, reverse=True)
    d = len(nbrs)
    return tuple(sorted((nbrs2[(i + shift) % d], nbrs[i]) for i in range(d)))


def diamond_sum(
    phi: RotationSystem,
    v: int,
    phi2: RotationSystem,
    v2: int,
    shift: int = 0,
) -> DiamondResult:
    """Glue the two embeddings along the excised disks around v and v'.

    Vertices of phi keep their ids (merged vertices absorb their partners);
    surviving phi2 vertices are renamed to fresh ids, reported in the
    result's vertex_map.  Bookkeeping (V, E, F, chi) is asserted on every
    call, as is quadrangularity closure when both inputs are quadrangular.
    """
    d = phi.degree(v)
    if phi2.degree(v2) != d:
        raise DiamondError(
            f"degree mismatch: deg({v}) = {d} but deg({v2}) = {phi2.degree(v2)}"
        )
    if d < 1:
        raise DiamondError("cannot excise an isolated vertex")
    _check_excisable(phi, v)
    _check_excisable(phi2, v2)
    if not 0 <= shift < d:
        raise DiamondError(f"shift {shift} out of range 0..{d - 1}")

    faces1 = trace_faces(phi)
    faces2 = trace_faces(phi2)

    phi_n = normalize_at(phi, v)
    phi2_n = normalize_at(phi2, v2)
    arcs_v, nbrs = _frame(phi_n, v, reverse=False)
    arcs_v2, nbrs2 = _frame(phi2_n, v2, reverse=True)

    partner = {nbrs2[(i + shift) % d]: nbrs[i] for i in range(d)}
    spoke2_of = {nbrs2[(i + shift) % d]: arcs_v2[(i + shift) % d] for i in range(d)}
    spoke_of = {nbrs[i]: arcs_v[i] for i in range(d)}
    for i in range(d):
        u, u2 = nbrs[i], nbrs2[(i + shift) % d]
        if phi_n.degree(u) == 1 and phi2_n.degree(u2) == 1:
            raise DiamondError(f"merging {u} with {u2} would isolate the merged vertex")

    fresh = max(phi_n.rotations) + 1
    vertex_map: dict[int, int] = {}
    for w in sorted(phi2_n.rotations):
        if w == v2:
            continue
        if w in partner:
            vertex_map[w] = partner[w]
        else:
            vertex_map[w] = fresh
            fresh += 1

    new_edges: list[tuple[int, int]] = []
    new_sig: list[int] = []
    emap1: dict[int, int] = {}
    emap2: dict[int, int] = {}
    for e, (a, b) in enumerate(phi_n.edges):
        if v in (a, b):
            continue
        emap1[e] = len(new_edges)
        new_edges.append((a, b))
        new_sig.append(phi_n.signature[e])
    for e, (a, b) in enumerate(phi2_n.edges):
        if v2 in (a, b):
            continue
        emap2[e] = len(new_edges)
        new_edges.append((vertex_map[a], vertex_map[b]))
        new_sig.append(phi2_n.signature[e])

    def map_arc1(arc: int) -> int:
        return 2 * emap1[arc >> 1] | (arc & 1)

    def map_arc2(arc: int) -> int:
        return 2 * emap2[arc >> 1] | (arc & 1)

    rotations: dict[int, tuple[int, ...]] = {}
    for w, rot in phi_n.rotations.items():
        if w == v or w in spoke_of:
            continue
        rotations[w] = tuple(map_arc1(a) for a in rot)
    for w2, rot in phi2_n.rotations.items():
        if w2 == v2 or w2 in partner:
            continue
        rotations[vertex_map[w2]] = tuple(map_arc2(a) for a in rot)
    for i in range(d):
        u = nbrs[i]
        u2 = nbrs2[(i + shift) % d]
        rot1 = phi_n.rotations[u]
        spoke1 = spoke_of[u] ^ 1  # arc u -> v
        p_block = rotate_to(rot1, rot1.index(spoke1))[1:]
        rot2 = phi2_n.rotations[u2]
        spoke2 = spoke2_of[u2] ^ 1  # arc u2 -> v2
        q_block = rotate_to(rot2, rot2.index(spoke2))[1:]
        rotations[u] = tuple(map_arc1(a) for a in p_block) + tuple(
            map_arc2(a) for a in q_block
        )

    labels = {w: t for w, t in phi_n.labels.items() if w != v}
    for w2, t in phi2_n.labels.items():
        if w2 != v2 and vertex_map[w2] not in labels:
            labels[vertex_map[w2]] = t

    result = RotationSystem(
        edges=tuple(new_edges),
        rotations=rotations,
        signature=tuple(new_sig),
        labels=labels,
    )
    result.validate()

    faces_r = trace_faces(result)
    assert len(result.rotations) == len(phi.rotations) + len(phi2.rotations) - 2 - d
    assert len(result.edges) == len(phi.edges) + len(phi2.edges) - 2 * d
    assert len(faces_r) == len(faces1) + len(faces2) - d, "face bookkeeping broken"
    if all(len(f) == 4 for f in faces1) and all(len(f) == 4 for f in faces2):
        assert all(len(f) == 4 for f in faces_r), "quadrangularity not preserved"

    plan = GluingPlan(
        excised=(v, v2),
        degree=d,
        shift=shift,
        merge_map=tuple(sorted((u2, u) for u2, u in partner.items())),
    )
    return DiamondResult(system=result, plan=plan, vertex_map=vertex_map)


def valid_shifts(
    phi: RotationSystem,
    v: int,
    phi2: RotationSystem,
    v2: int,
    unsaturated_first: frozenset[int] | set[int] = frozenset(),
    unsaturated_second: frozenset[int] | set[int] = frozenset(),
) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    """All shifts whose merge map never joins two unsaturated vertices.

    Returns (shift, merge_map) pairs in shift order; merge maps pair each
    phi2 neighbor with the phi neighbor it would be merged onto, so callers
    can additionally demand specific pairings.
    """
    if v in unsaturated_first:
        raise DiamondError(f"excised vertex {v} is unsaturated")
    if v2 in unsaturated_second:
        raise DiamondError(f"excised vertex {v2} is unsaturated")
    d = phi.degree(v)
    if phi2.degree(v2) != d:
        raise DiamondError("degree mismatch")
    out = []
    for t in range(d):
        merge = merge_map_for_shift(phi, v, phi2, v2, t)
        if all(
            not (b in unsaturated_second and a in unsaturated_first)
            for b, a in merge
        ):
            out.append((t, merge))
    return out


def check_observation7(
    before: RotationSystem,
    after: RotationSystem,
    excised: int,
    tracked: set[int] | None = None,
    vertex_map: dict[int, int] | None = None,
) -> bool:
    """Do tracked vertices keep their rotations, up to reversal, after a sum?

    ``tracked`` defaults to every vertex of ``before`` except the excised
    one.  ``vertex_map`` renames before-vertices into the result (identity
    where missing) and is applied to neighbor names before comparing.
    """
    vmap = dict(vertex_map or {})
    if tracked is None:
        tracked = set(before.rotations) - {excised}
    for w in tracked:
        if w == excised:
            continue
        w_after = vmap.get(w, w)
        if w_after not in after.rotations:
            return False
        old = tuple(vmap.get(u, u) for u in before.neighbors(w))
        if not cyclic_equal_up_to_reversal(old, after.neighbors(w_after)):
            return False
    return True
