"""General rotation systems: embedded (multi)graphs on possibly nonorientable surfaces.

A rotation system is a per-vertex cyclic order of outgoing arcs plus a
signature in {-1, +1} per edge.  Each edge e induces two arcs, 2*e
(tail = first endpoint) and 2*e + 1 (tail = second endpoint); loops are
supported, contributing both arcs to the same rotation.  Faces are traced
from the rotation system; crossing an edge with signature -1 reverses the
local orientation of the walk.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

Arc = int
State = tuple[Arc, int]  # (arc, local-orientation sign)


class InvalidRotationSystem(ValueError):
    """A structural invariant of a rotation system is violated."""


def reverse_arc(arc: Arc) -> Arc:
    return arc ^ 1


def arc_edge(arc: Arc) -> int:
    return arc >> 1


def _state_key(state: State) -> tuple[int, int]:
    arc, sign = state
    return (arc, 0 if sign > 0 else 1)


@dataclass(frozen=True)
class SurfaceClass:
    """A closed surface: orientable S_g or nonorientable N_h (h crosscaps)."""

    orientable: bool
    genus: int

    @property
    def kind(self) -> str:
        return "orientable" if self.orientable else "nonorientable"

    @property
    def euler_characteristic(self) -> int:
        if self.orientable:
            return 2 - 2 * self.genus
        return 2 - self.genus

    @property
    def notation(self) -> str:
        return f"S_{self.genus}" if self.orientable else f"N_{self.genus}"

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if not self.orientable and self.genus < 1:
            raise ValueError("a nonorientable surface needs at least one crosscap")


@dataclass(frozen=True)
class FaceWalk:
    """One traced face boundary: a cyclic sequence of (arc, sign) states.

    ``vertices[i]`` is the tail of ``states[i][0]``, so the walk visits
    vertices[0] -> vertices[1] -> ... -> vertices[0].
    """

    states: tuple[State, ...]
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.states)

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(arc for arc, _ in self.states)

    def visits(self, vertex: int) -> bool:
        return vertex in self.vertices

    def started_at(self, vertex: int) -> FaceWalk:
        """The same walk, rotated to begin at the first visit of vertex."""
        i = self.vertices.index(vertex)
        return FaceWalk(
            states=self.states[i:] + self.states[:i],
            vertices=self.vertices[i:] + self.vertices[:i],
        )


@dataclass(frozen=True)
class RotationSystem:
    """An embedded multigraph: edge endpoints, rotations of arcs, edge signature.

    Instances are values: every operation returns a new system.  ``labels``
    is presentation-only metadata (e.g. "a", "b", "c" for white vertices).
    """

    edges: tuple[tuple[int, int], ...]
    rotations: dict[int, tuple[Arc, ...]]
    signature: tuple[int, ...]
    labels: dict[int, str] = field(default_factory=dict)

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_neighbors(
        rotations: Mapping[int, Sequence[int]],
        twisted: Iterable[tuple[int, int]] = (),
        labels: Mapping[int, str] | None = None,
    ) -> RotationSystem:
        """Build a simple-graph system from neighbor lists in cyclic order.

        Every unordered pair {u, v} may appear at most once per side; use the
        arc-level constructor for loops or parallel edges.
        """
        pair_count: dict[tuple[int, int], int] = {}
        for v, nbrs in rotations.items():
            for u in nbrs:
                if u == v:
                    raise InvalidRotationSystem(
                        f"loop at {v}: use the arc-level constructor"
                    )
                if u not in rotations:
                    raise InvalidRotationSystem(f"unknown neighbor {u} at vertex {v}")
                key = (min(u, v), max(u, v))
                pair_count[key] = pair_count.get(key, 0) + 1
        for (u, v), count in sorted(pair_count.items()):
            if count != 2:
                raise InvalidRotationSystem(
                    f"edge {u}-{v} listed {count} time(s); expected once per endpoint"
                )
        edge_list = tuple(sorted(pair_count))
        edge_index = {pair: i for i, pair in enumerate(edge_list)}
        arc_of: dict[tuple[int, int], Arc] = {}
        for (u, v), e in edge_index.items():
            arc_of[(u, v)] = 2 * e
            arc_of[(v, u)] = 2 * e + 1
        rot = {
            v: tuple(arc_of[(v, u)] for u in nbrs)
            for v, nbrs in rotations.items()
        }
        sig = [1] * len(edge_list)
        for u, v in twisted:
            key = (min(u, v), max(u, v))
            if key not in edge_index:
                raise InvalidRotationSystem(f"twisted edge {u}-{v} is not an edge")
            sig[edge_index[key]] = -1
        rs = RotationSystem(
            edges=edge_list,
            rotations=rot,
            signature=tuple(sig),
            labels=dict(labels or {}),
        )
        rs.validate()
        return rs

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.rotations))

    def arc_tail(self, arc: Arc) -> int:
        u, v = self.edges[arc >> 1]
        return u if arc & 1 == 0 else v

    def arc_head(self, arc: Arc) -> int:
        u, v = self.edges[arc >> 1]
        return v if arc & 1 == 0 else u

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Heads of v's rotation, in cyclic order (repeats for multi-edges)."""
        return tuple(self.arc_head(a) for a in self.rotations[v])

    def arc_between(self, v: int, u: int) -> Arc:
        """The unique arc v -> u; error if absent or ambiguous."""
        found = [a for a in self.rotations[v] if self.arc_head(a) == u]
        if len(found) != 1:
            raise InvalidRotationSystem(
                f"expected exactly one arc {v}->{u}, found {len(found)}"
            )
        return found[0]

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            if u == v or (u, v) in seen:
                return False
            seen.add((u, v))
        return True

    def edge_label(self, e: int) -> str:
        u, v = self.edges[e]
        return f"{u}-{v}"

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        """Check all structural invariants; raise InvalidRotationSystem if broken."""
        n_edges = len(self.edges)
        if len(self.signature) != n_edges:
            raise InvalidRotationSystem("missing signature: one value per edge required")
        if any(s not in (-1, 1) for s in self.signature):
            raise InvalidRotationSystem("signature values must be -1 or +1")
        vertex_set = set(self.rotations)
        for u, v in self.edges:
            if u not in vertex_set or v not in vertex_set:
                raise InvalidRotationSystem(f"edge {u}-{v} references unknown vertex")
        seen: set[Arc] = set()
        for v, rot in self.rotations.items():
            for arc in rot:
                if not 0 <= arc < 2 * n_edges:
                    raise InvalidRotationSystem(f"unknown arc {arc} at vertex {v}")
                if self.arc_tail(arc) != v:
                    raise InvalidRotationSystem(
                        f"dangling arc: arc {arc} ({self.edge_label(arc >> 1)}) "
                        f"in rotation of {v} has tail {self.arc_tail(arc)}"
                    )
                if arc in seen:
                    raise InvalidRotationSystem(f"arc {arc} appears twice")
                seen.add(arc)
        if len(seen) != 2 * n_edges:
            missing = sorted(set(range(2 * n_edges)) - seen)
            raise InvalidRotationSystem(
                f"rotation length mismatch: arcs {missing} appear in no rotation"
            )

    def is_connected(self) -> bool:
        verts = self.vertices
        if not verts:
            return True
        adj: dict[int, list[int]] = {v: [] for v in verts}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        stack, seen = [verts[0]], {verts[0]}
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)

    # -- derived systems ---------------------------------------------------

    def relabeled(self, mapping: Mapping[int, int]) -> RotationSystem:
        """Rename vertices; mapping must be injective and cover all vertices."""
        if sorted(mapping) != list(self.vertices):
            raise ValueError("relabeling must cover exactly the vertex set")
        if len(set(mapping.values())) != len(mapping):
            raise ValueError("relabeling must be injective")
        return RotationSystem(
            edges=tuple((mapping[u], mapping[v]) for u, v in self.edges),
            rotations={mapping[v]: rot for v, rot in self.rotations.items()},
            signature=self.signature,
            labels={mapping[v]: text for v, text in self.labels.items()},
        )


# -- face tracing ------------------------------------------------------------


def _arc_positions(rs: RotationSystem) -> dict[Arc, int]:
    pos: dict[Arc, int] = {}
    for rot in rs.rotations.values():
        for i, arc in enumerate(rot):
            pos[arc] = i
    return pos


def successor_state(rs: RotationSystem, state: State, pos: dict[Arc, int] | None = None) -> State:
    """One step of the face-tracing rule.

    From (a, s): the new sign is s' = s * signature(edge(a)); at the head of
    a, step forward from the reverse arc in that vertex's rotation when
    s' = +1, backward when s' = -1.
    """
    if pos is None:
        pos = _arc_positions(rs)
    arc, sign = state
    new_sign = sign * rs.signature[arc >> 1]
    back = reverse_arc(arc)
    rot = rs.rotations[rs.arc_head(arc)]
    i = (pos[back] + (1 if new_sign > 0 else -1)) % len(rot)
    return (rot[i], new_sign)


def trace_faces(rs: RotationSystem) -> tuple[FaceWalk, ...]:
    """All faces of the embedding, one canonical representative per face.

    Orbits of the successor rule on (arc, sign) states come in mirror pairs
    describing the same face from the two sides; the representative reported
    is the orbit containing the lexicographically least state.
    """
    pos = _arc_positions(rs)
    visited: set[State] = set()
    faces: list[FaceWalk] = []
    for arc in range(2 * len(rs.edges)):
        for sign in (1, -1):
            start = (arc, sign)
            if start in visited:
                continue
            orbit: list[State] = []
            state = start
            while True:
                orbit.append(state)
                visited.add(state)
                state = successor_state(rs, state, pos)
                if state == start:
                    break
                if state in visited:
                    raise AssertionError("face tracing re-entered a visited state")
            # The involution conjugating the successor rule to its inverse
            # carries the edge signature: the mirror of (a, s) is
            # (reverse(a), -s * signature(edge(a))).
            for a, s in orbit:
                mirror = (reverse_arc(a), -s * rs.signature[a >> 1])
                if mirror in visited and mirror not in orbit:
                    raise AssertionError("mirror orbit partially visited")
                visited.add(mirror)
            faces.append(
                FaceWalk(
                    states=tuple(orbit),
                    vertices=tuple(rs.arc_tail(a) for a, _ in orbit),
                )
            )
    return tuple(faces)


def face_length_multiset(rs: RotationSystem) -> tuple[int, ...]:
    return tuple(sorted(len(f) for f in trace_faces(rs)))


def euler_characteristic(rs: RotationSystem) -> int:
    """|V| - |E| + |F|.  Requires a connected system without isolated vertices."""
    if not rs.is_connected():
        raise InvalidRotationSystem("Euler characteristic needs a connected system")
    if any(len(rot) == 0 for rot in rs.rotations.values()):
        raise InvalidRotationSystem(
            "isolated vertex: no cellular face structure to trace"
        )
    return len(rs.rotations) - len(rs.edges) + len(trace_faces(rs))


def is_orientable(rs: RotationSystem) -> bool:
    """True iff some vertex-sign assignment realizes the signature.

    Propagates signs over a spanning tree and checks every non-tree edge;
    equivalently, no closed walk crosses an odd number of twisted edges.
    """
    sigma: dict[int, int] = {}
    incident: dict[int, list[int]] = {v: [] for v in rs.rotations}
    for e, (u, v) in enumerate(rs.edges):
        if u == v:
            if rs.signature[e] == -1:
                return False
            continue
        incident[u].append(e)
        incident[v].append(e)
    for root in rs.rotations:
        if root in sigma:
            continue
        sigma[root] = 1
        stack = [root]
        while stack:
            x = stack.pop()
            for e in incident[x]:
                u, v = rs.edges[e]
                y = v if x == u else u
                want = sigma[x] * rs.signature[e]
                if y not in sigma:
                    sigma[y] = want
                    stack.append(y)
                elif sigma[y] != want:
                    return False
    return True


def surface_of(rs: RotationSystem) -> SurfaceClass:
    """The closed surface described by the system (connected input required)."""
    chi = euler_characteristic(rs)
    if is_orientable(rs):
        if chi % 2 != 0:
            raise AssertionError("orientable surface with odd Euler characteristic")
        return SurfaceClass(orientable=True, genus=(2 - chi) // 2)
    return SurfaceClass(orientable=False, genus=2 - chi)


def is_quadrangular(rs: RotationSystem) -> bool:
    """True iff every face boundary has length exactly 4."""
    return all(len(f) == 4 for f in trace_faces(rs))


# -- embedding-preserving moves ----------------------------------------------


def vertex_flip(rs: RotationSystem, v: int) -> RotationSystem:
    """Reverse v's rotation and negate the signature of its non-loop edges.

    Loops at v are unchanged (their signature would be negated twice).  The
    face-length multiset and the surface class are invariant.
    """
    if v not in rs.rotations:
        raise InvalidRotationSystem(f"unknown vertex {v}")
    sig = list(rs.signature)
    for arc in rs.rotations[v]:
        e = arc >> 1
        u, w = rs.edges[e]
        if u != w:
            sig[e] = -sig[e]
    rotations = dict(rs.rotations)
    rotations[v] = tuple(reversed(rs.rotations[v]))
    return RotationSystem(
        edges=rs.edges, rotations=rotations, signature=tuple(sig), labels=rs.labels
    )


def normalize_at(rs: RotationSystem, v: int) -> RotationSystem:
    """Flip neighbors of v until every edge at v has signature +1.

    Requires v loop-free; parallel edges to one neighbor must agree in
    signature (otherwise no sequence of neighbor flips can clean them).
    """
    if v not in rs.rotations:
        raise InvalidRotationSystem(f"unknown vertex {v}")
    by_neighbor: dict[int, set[int]] = {}
    for arc in rs.rotations[v]:
        head = rs.arc_head(arc)
        if head == v:
            raise InvalidRotationSystem(f"loop at {v}: cannot normalize by neighbor flips")
        by_neighbor.setdefault(head, set()).add(rs.signature[arc >> 1])
    out = rs
    for u in sorted(by_neighbor):
        signs = by_neighbor[u]
        if signs == {-1, 1}:
            raise InvalidRotationSystem(
                f"parallel edges {v}-{u} with mixed signatures cannot be normalized"
            )
        if signs == {-1}:
            out = vertex_flip(out, u)
    assert all(out.signature[a >> 1] == 1 for a in out.rotations[v])
    return out


# -- separation within a rotation ---------------------------------------------


def separation_counts(rotation: Sequence[int], i: int, j: int) -> tuple[int, int]:
    """(p, q): vertices strictly between i and j along each direction.

    The rotation must have even length with i and j each present once; then
    p + q = len - 2 and p = q (mod 2), so odd-separation is well-defined.
    """
    rot = tuple(rotation)
    if len(rot) % 2 != 0:
        raise ValueError("separation parity is undefined for odd-length rotations")
    if i == j:
        raise ValueError("separation needs two distinct vertices")
    for x in (i, j):
        if rot.count(x) != 1:
            raise ValueError(f"vertex {x} must appear exactly once in the rotation")
    pi, pj = rot.index(i), rot.index(j)
    p = (pj - pi - 1) % len(rot)
    return p, len(rot) - 2 - p


def odd_separated(rotation: Sequence[int], i: int, j: int) -> bool:
    """True iff i and j are separated by an odd number of vertices."""
    p, _ = separation_counts(rotation, i, j)
    return p % 2 == 1
