"""Construction pipelines for nonorientable quadrangular embeddings.

Bottom of the tower is an exhaustively searched quadrangular K_{3,4} in the
projective plane.  Diamond sums grow it to K_{3,t}, then to K_{m,t};
degree-2 black insertions produce the G(3,2n,2) gadgets with a prescribed
separation at the saturated white; an odd pairing drives the step-by-step
desaturation that turns K_{m,2n} into G(m+n,2n,2n).  Every intermediate
embedding is certified.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cache

from quadembed.diamond import check_observation7, diamond_sum, faces_at, valid_shifts
from quadembed.ncbg import NcbgSpec, certify, classify_embedding
from quadembed.rotation import (
    FaceWalk,
    RotationSystem,
    is_orientable,
    is_quadrangular,
    odd_separated,
    separation_counts,
    successor_state,
    trace_faces,
)


class ConstructionError(RuntimeError):
    """A pipeline step failed in a way that indicates a bug or bad input."""


@dataclass(frozen=True)
class OddPairing:
    """Pairs of black vertices, each assigned a distinct white vertex.

    Entry k pairs blacks ``pairs[k]`` with white ``whites[k]``; validity
    means the pair is odd-separated in that white's rotation.
    """

    pairs: tuple[tuple[int, int], ...]
    whites: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.pairs) != len(self.whites):
            raise ValueError("one white per pair required")
        if len(set(self.whites)) != len(self.whites):
            raise ValueError("assigned whites must be distinct")
        flat = [b for pair in self.pairs for b in pair]
        if len(set(flat)) != len(flat):
            raise ValueError("pairs must partition the black vertices")

    def __len__(self) -> int:
        return len(self.pairs)


def validate_odd_pairing(
    white_rotations: Mapping[int, Sequence[int]],
    pairing: OddPairing,
    blacks: Sequence[int],
) -> None:
    """Check an odd pairing against rotations (signatures are irrelevant)."""
    covered = sorted(b for pair in pairing.pairs for b in pair)
    if covered != sorted(blacks):
        raise ValueError("pairs do not partition the black vertices")
    for (i, j), w in zip(pairing.pairs, pairing.whites):
        if w not in white_rotations:
            raise ValueError(f"assigned vertex {w} has no known rotation")
        if not odd_separated(white_rotations[w], i, j):
            raise ValueError(
                f"pair ({i},{j}) is not odd-separated in the rotation of {w}"
            )


@dataclass(frozen=True)
class BuiltEmbedding:
    """A constructed embedding plus its coloring and certified spec."""

    system: RotationSystem
    whites: frozenset[int]
    spec: NcbgSpec

    @property
    def blacks(self) -> frozenset[int]:
        return frozenset(self.system.rotations) - self.whites


def _certify_or_die(rs: RotationSystem, whites: frozenset[int], m: int, n: int, k: int,
                    context: str) -> BuiltEmbedding:
    report = certify(rs, NcbgSpec.canonical(m, n, k), whites=set(whites))
    if not report.passed:
        raise ConstructionError(f"{context}: certification failed\n{report.text()}")
    assert report.classification is not None
    return BuiltEmbedding(system=rs, whites=whites, spec=report.classification.spec)


# -- base case: exhaustive search for K_{3,4} -----------------------------------


@cache
def build_k34_base() -> BuiltEmbedding:
    """A nonorientable quadrangular K_{3,4} in N_1, by exhaustive search.

    Whites are 0,1,2 and blacks 3..6.  Up to relabeling, white 0 may be
    assumed to have rotation (3,4,5,6); the other rotations and a
    tree-gauged signature are enumerated in lexicographic order and the
    first system tracing to six quadrilaterals on N_1 is returned.
    """
    blacks = (3, 4, 5, 6)
    free_edges = [(1, 4), (1, 5), (1, 6), (2, 4), (2, 5), (2, 6)]
    for rot1_tail in itertools.permutations((4, 5, 6)):
        for rot2_tail in itertools.permutations((4, 5, 6)):
            for black_orders in itertools.product(((0, 1, 2), (0, 2, 1)), repeat=4):
                rotations = {
                    0: blacks,
                    1: (3, *rot1_tail),
                    2: (3, *rot2_tail),
                    3: black_orders[0],
                    4: black_orders[1],
                    5: black_orders[2],
                    6: black_orders[3],
                }
                for bits in range(64):
                    twisted = [free_edges[i] for i in range(6) if bits >> i & 1]
                    rs = RotationSystem.from_neighbors(rotations, twisted=twisted)
                    if is_quadrangular(rs) and not is_orientable(rs):
                        return _certify_or_die(
                            rs, frozenset({0, 1, 2}), 3, 4, 0, "K_{3,4} base"
                        )
    raise ConstructionError(
        "exhaustive search found no nonorientable quadrangular K_{3,4}; "
        "this falsifies the setup"
    )


# -- degree-2 insertion ----------------------------------------------------------


def insert_degree2_black(
    rs: RotationSystem, face: FaceWalk, white_a: int, z: int | None = None
) -> RotationSystem:
    """Insert a degree-2 black vertex z into a quadrilateral face at white_a.

    The face (a, s, W, t) is replaced by the quads (a, s, W, z) and
    (a, z, W, t); the surface is unchanged (V+1, E+2, F+1).  The new edge
    a-z gets signature +1; z-W gets the signature product along the face
    path a-s-W, which keeps every cycle parity, hence orientability, intact.
    """
    if len(face) != 4:
        raise ConstructionError("insertion target must be a quadrilateral face")
    for idx, state in enumerate(face.states):
        nxt = face.states[(idx + 1) % 4]
        if successor_state(rs, state) != nxt:
            raise ConstructionError("given walk is not a face of this system")
    if white_a not in face.vertices:
        raise ConstructionError(f"vertex {white_a} is not on the face")
    walk = face.started_at(white_a)
    a, s, w_opp, t = walk.vertices
    sigma0 = walk.states[0][1]
    sigma2 = walk.states[2][1]
    if z is None:
        z = max(rs.rotations) + 1
    elif z in rs.rotations:
        raise ConstructionError(f"vertex {z} already exists")

    e_az = len(rs.edges)
    e_wz = e_az + 1
    edges = rs.edges + ((a, z), (w_opp, z))
    signature = rs.signature + (1, sigma0 * sigma2)

    rotations = dict(rs.rotations)
    arc_at = rs.arc_between(a, t)
    rot_a = list(rotations[a])
    pos = rot_a.index(arc_at)
    rot_a.insert(pos + 1 if sigma0 == 1 else pos, 2 * e_az)
    rotations[a] = tuple(rot_a)
    arc_ws = rs.arc_between(w_opp, s)
    rot_w = list(rotations[w_opp])
    pos = rot_w.index(arc_ws)
    rot_w.insert(pos + 1 if sigma2 == 1 else pos, 2 * e_wz)
    rotations[w_opp] = tuple(rot_w)
    rotations[z] = (2 * e_az + 1, 2 * e_wz + 1)

    out = RotationSystem(
        edges=edges, rotations=rotations, signature=signature, labels=rs.labels
    )
    out.validate()
    assert len(trace_faces(out)) == len(trace_faces(rs)) + 1, "face count must grow by 1"
    assert is_orientable(out) == is_orientable(rs), "insertion changed orientability"
    if is_quadrangular(rs):
        assert is_quadrangular(out)
    return out


# -- K_{3,t} and the Lemma-3 gadget ---------------------------------------------


@cache
def build_k3_even(t: int) -> BuiltEmbedding:
    """Nonorientable quadrangular K_{3,t} for even t >= 4, in N_{(t-2)/2}.

    Grown from the K_{3,4} base by diamond sums excising black vertices
    (the three whites are merged, so they keep ids 0,1,2 throughout).
    """
    if t % 2 != 0:
        raise ConstructionError(
            f"K_(3,{t}) has no quadrangular embedding: face count 3t/2 must be integral"
        )
    if t < 4:
        raise ConstructionError("build_k3_even requires t >= 4")
    current = build_k34_base()
    while len(current.blacks) < t:
        base = build_k34_base()
        excised = min(current.blacks)
        res = diamond_sum(current.system, excised, base.system, 3, shift=0)
        # With a black excised it is the unmerged blacks whose rotations
        # must survive (the whites absorb the spliced neighborhoods).
        assert check_observation7(
            current.system, res.system, excised, tracked=set(current.blacks) - {excised}
        )
        blacks_now = len(current.blacks) + 2
        current = _certify_or_die(
            res.system, frozenset({0, 1, 2}), 3, blacks_now, 0, f"K_(3,{blacks_now})"
        )
    return current


@dataclass(frozen=True)
class Lemma3Embedding:
    """G(3,2n,2) with its saturated white and the two inserted blacks."""

    system: RotationSystem
    saturated_white: int
    whites: frozenset[int]
    inserted: tuple[int, int]  # the two unsaturated (degree-2) black vertices
    separation: tuple[int, int]


def _planar_k32() -> BuiltEmbedding:
    rs = RotationSystem.from_neighbors(
        {0: (3, 4), 1: (3, 4), 2: (3, 4), 3: (0, 1, 2), 4: (0, 2, 1)}
    )
    assert is_quadrangular(rs) and is_orientable(rs)
    cls = classify_embedding(rs, whites={0, 1, 2})
    assert (cls.spec.m, cls.spec.n, cls.spec.k) == (3, 2, 0)
    return BuiltEmbedding(system=rs, whites=frozenset({0, 1, 2}), spec=cls.spec)


def opposite_whites_at(rs: RotationSystem, a: int) -> list[int]:
    """The opposite white of each quadrilateral corner face around a."""
    opposite = []
    for face in faces_at(rs, a):
        if len(face) != 4:
            raise ConstructionError("corner face is not quadrilateral")
        opposite.append(face.started_at(a).vertices[2])
    return opposite


def build_g3_2n_2(n: int, p: int) -> Lemma3Embedding:
    """Quadrangular G(3,2n,2) whose unsaturated blacks sit p apart at white a.

    Starts from quadrangular K_{3,2n-2}, checks that opposite whites of the
    corner faces at a alternate, then inserts one degree-2 black into a
    b-face and one into a c-face whose corner distance realizes p.
    """
    if n < 2:
        raise ConstructionError("build_g3_2n_2 requires n >= 2")
    if p % 2 != 1 or not 1 <= p < 2 * n - 2:
        raise ConstructionError(f"p={p} must be odd with 1 <= p < {2 * n - 2}")
    start = _planar_k32() if n == 2 else build_k3_even(2 * n - 2)
    rs = start.system
    a = 0
    d = rs.degree(a)

    opposite = opposite_whites_at(rs, a)
    assert set(opposite) == {1, 2}, "corner faces must oppose the other two whites"
    assert all(opposite[i] != opposite[(i + 1) % d] for i in range(d)), (
        "alternation invariant violated around the saturated white"
    )

    spokes = [rs.arc_head(arc) for arc in rs.rotations[a]]
    for i in range(d):
        for j in range(d):
            if i == j or opposite[i] == opposite[j]:
                continue
            with_z1 = insert_degree2_black(rs, faces_at(rs, a)[i], a)
            z1 = max(with_z1.rotations)
            # Re-locate the face between the original spokes j, j+1.
            arcs_now = with_z1.rotations[a]
            corner = arcs_now.index(with_z1.arc_between(a, spokes[j]))
            assert with_z1.arc_head(arcs_now[(corner + 1) % len(arcs_now)]) == spokes[(j + 1) % d]
            with_z2 = insert_degree2_black(with_z1, faces_at(with_z1, a)[corner], a)
            z2 = max(with_z2.rotations)
            sep = separation_counts(with_z2.neighbors(a), z1, z2)
            if p not in sep:
                continue
            whites = frozenset({0, 1, 2})
            built = _certify_or_die(with_z2, whites, 3, 2 * n, 2, f"G(3,{2 * n},2)")
            cls = classify_embedding(built.system, whites=set(whites))
            assert cls.saturated & cls.whites == {a}
            assert cls.unsaturated_blacks() == {z1, z2}
            return Lemma3Embedding(
                system=built.system,
                saturated_white=a,
                whites=whites,
                inserted=(z1, z2),
                separation=sep,
            )
    raise ConstructionError(f"no face pair at the saturated white realizes p={p}")


# -- odd pairings ----------------------------------------------------------------


def find_odd_pairing(rs: RotationSystem, whites: set[int]) -> OddPairing | None:
    """Backtracking search for an odd pairing of a K_{m,2n} embedding."""
    cls = classify_embedding(rs, whites=whites)
    if cls.spec.k != 0:
        raise ConstructionError("odd pairings are defined on complete bipartite graphs")
    blacks = sorted(cls.blacks)
    if len(blacks) % 2 != 0:
        raise ConstructionError("an even number of black vertices is required")
    if cls.spec.m < len(blacks) // 2:
        raise ConstructionError("need at least n whites for n pairs (m >= n)")
    rotations = {w: rs.neighbors(w) for w in sorted(whites)}

    def extend(remaining: list[int], used: set[int], acc: list[tuple[int, int, int]]):
        if not remaining:
            return acc
        i = remaining[0]
        for j in remaining[1:]:
            for w in rotations:
                if w in used:
                    continue
                if odd_separated(rotations[w], i, j):
                    rest = [b for b in remaining if b not in (i, j)]
                    found = extend(rest, used | {w}, acc + [(i, j, w)])
                    if found:
                        return found
        return None

    solution = extend(blacks, set(), [])
    if solution is None:
        return None
    return OddPairing(
        pairs=tuple((i, j) for i, j, _ in solution),
        whites=tuple(w for _, _, w in solution),
    )


def apply_odd_pairing(
    rs: RotationSystem, whites: set[int], pairing: OddPairing
) -> BuiltEmbedding:
    """Desaturate paired blacks step by step: K_{m,2n} -> G(m+n,2n,2n).

    Step k measures the separation of the k-th pair at its white, builds the
    matching G(3,2n,2), and diamond-sums it in with a shift gluing the two
    inserted blacks onto the pair.  Every intermediate embedding must
    certify as G(m+k,2n,2k) and pass the rotation-preservation check.
    """
    cls = classify_embedding(rs, whites=whites)
    m, two_n = cls.spec.m, cls.spec.n
    n = two_n // 2
    if cls.spec.k != 0 or two_n % 2 != 0:
        raise ConstructionError("apply_odd_pairing expects a K_{m,2n} embedding")
    if m < n:
        raise ConstructionError(f"m={m} < n={n}: not enough whites to excise")
    if not (is_quadrangular(rs) and not is_orientable(rs)):
        raise ConstructionError("input must be nonorientable and quadrangular")
    validate_odd_pairing({w: rs.neighbors(w) for w in whites}, pairing, sorted(cls.blacks))

    phi = rs
    phi_whites = frozenset(whites)
    for k, ((i, j), alpha) in enumerate(zip(pairing.pairs, pairing.whites), start=1):
        before = phi
        cls_now = classify_embedding(phi, whites=set(phi_whites))
        assert {i, j} <= cls_now.saturated, "paired blacks must still be saturated"
        assert alpha in cls_now.saturated, "excised white must be saturated"
        p, q = separation_counts(phi.neighbors(alpha), i, j)
        assert p % 2 == 1, "odd pairing must survive the pipeline"
        piece = build_g3_2n_2(n, p)
        z1, z2 = piece.inserted

        unsat_big = frozenset(cls_now.unsaturated_blacks())
        candidates = [
            t
            for t, merge in valid_shifts(
                phi, alpha, piece.system, piece.saturated_white,
                unsat_big, frozenset({z1, z2}),
            )
            if {(z1, i), (z2, j)} <= set(merge) or {(z1, j), (z2, i)} <= set(merge)
        ]
        if not candidates:
            raise ConstructionError(
                f"no shift glues the inserted blacks onto ({i},{j}) at step {k}; "
                "this indicates an implementation bug"
            )
        res = diamond_sum(phi, alpha, piece.system, piece.saturated_white, candidates[0])
        phi = res.system
        new_whites = (phi_whites - {alpha}) | {
            res.vertex_map[w] for w in piece.whites if w != piece.saturated_white
        }
        phi_whites = frozenset(new_whites)

        assert check_observation7(before, phi, alpha, tracked=set(phi_whites) & set(before.rotations))
        assert check_observation7(
            before=piece.system,
            after=phi,
            excised=piece.saturated_white,
            tracked=set(piece.whites) - {piece.saturated_white},
            vertex_map=res.vertex_map,
        )
        step = _certify_or_die(
            phi, phi_whites, m + k, two_n, 2 * k, f"pipeline step {k}"
        )
        step_cls = classify_embedding(phi, whites=set(phi_whites))
        assert len(step_cls.unsaturated_blacks()) == 2 * k
        phi = step.system
    return _certify_or_die(phi, phi_whites, m + n, two_n, two_n, "pipeline result")


# -- top-level builders ------------------------------------------------------------


def build_kbip(m: int, t: int, variant: int = 0) -> BuiltEmbedding:
    """Generic nonorientable quadrangular K_{m,t}, m >= 3, even t >= 4.

    Assembled from K_{3,t} pieces by diamond sums that excise saturated
    whites.  ``variant`` selects the shifts used at each assembly step so
    callers can ask for structurally different embeddings of the same graph.
    """
    if m < 3:
        raise ConstructionError("build_kbip requires m >= 3")
    current = build_k3_even(t)
    digits = variant
    while len(current.whites) < m:
        piece = build_k3_even(t)
        shift = digits % t
        digits //= t
        excise_big = max(current.whites)
        res = diamond_sum(current.system, excise_big, piece.system, 0, shift=shift)
        whites = (current.whites - {excise_big}) | {
            res.vertex_map[w] for w in (1, 2)
        }
        m_now = len(whites)
        current = _certify_or_die(
            res.system, frozenset(whites), m_now, t, 0, f"K_({m_now},{t})"
        )
    return current


def build_imbalanced(n: int, attempts: int = 24) -> BuiltEmbedding:
    """Nonorientable quadrangular G(2n+1, 2n, 2n) for n >= 3.

    Prefers Ringel's K_{n+1,2n} rotations with completed signatures and the
    printed odd pairing; larger n (or a failed completion) falls back to a
    generic diamond-sum K_{n+1,2n} with a searched pairing.
    """
    from quadembed import ringel

    if n < 3:
        raise ConstructionError("build_imbalanced requires n >= 3")
    if n <= 4:
        rot_only = ringel.ringel_rotations(n)
        completed = ringel.complete_signatures(rot_only)
        if completed is not None:
            pairing = ringel.paper_odd_pairing(n)
            return apply_odd_pairing(
                completed, set(rot_only.whites), pairing
            )
    for variant in range(attempts):
        k = build_kbip(n + 1, 2 * n, variant)
        pairing = find_odd_pairing(k.system, set(k.whites))
        if pairing is not None:
            return apply_odd_pairing(k.system, set(k.whites), pairing)
    raise ConstructionError(
        f"no odd pairing found on {attempts} embeddings of K_({n + 1},{2 * n})"
    )


def build_balanced_even(n: int, attempts: int = 24) -> BuiltEmbedding:
    """Nonorientable quadrangular G(2n, 2n, 2n) for n >= 4.

    n = 2 is the planar cube and out of scope; n = 3 is G(6,6,6), covered
    by build_g666.
    """
    if n == 3:
        raise ConstructionError("for n = 3 use build_g666()")
    if n < 4:
        raise ConstructionError("build_balanced_even requires n >= 4")
    for variant in range(attempts):
        k = build_kbip(n, 2 * n, variant)
        pairing = find_odd_pairing(k.system, set(k.whites))
        if pairing is not None:
            return apply_odd_pairing(k.system, set(k.whites), pairing)
    raise ConstructionError(
        f"no odd pairing found on {attempts} embeddings of K_({n},{2 * n})"
    )


def build_g666() -> BuiltEmbedding:
    """Nonorientable quadrangular G(6,6,6) in N_5 via Ringel's K_{3,6}.

    Uses the printed pairing {1,3} -> a, {2,5} -> b, {4,6} -> c on a
    signature completion of the three printed white rotations.
    """
    from quadembed import ringel

    rot_only = ringel.ringel_k36()
    completed = ringel.complete_signatures(rot_only)
    if completed is None:
        raise ConstructionError("K_{3,6} signature completion failed")
    pairing = OddPairing(pairs=((1, 3), (2, 5), (4, 6)), whites=(7, 8, 9))
    validate_odd_pairing(rot_only.white_rotations, pairing, rot_only.blacks)
    return apply_odd_pairing(completed, set(rot_only.whites), pairing)
