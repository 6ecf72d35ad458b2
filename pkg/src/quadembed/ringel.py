"""Ringel's printed rotations for K_{m,2n} and signature completion.

Only the white rotations are printed; black rotations and edge signatures
are reconstructed by search.  A quadrangular embedding with the given white
rotations is equivalent to a perfect matching on white corners (a corner of
white w is a pair of consecutive blacks in its rotation; each quadrilateral
face joins two corners carrying the same black pair at different whites).
From a matching, each black vertex's rotation is forced up to direction and
the signature follows from local orientation offsets, so candidates are
enumerated at face granularity and every candidate is verified by tracing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from quadembed.rotation import (
    RotationSystem,
    is_orientable,
    is_quadrangular,
    vertex_flip,
)


class BudgetExhausted(RuntimeError):
    """The search node budget ran out before the space was exhausted."""


DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class RotationsOnly:
    """White rotations of a complete bipartite graph, signatures unknown."""

    blacks: tuple[int, ...]
    white_rotations: dict[int, tuple[int, ...]]
    labels: dict[int, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        blacks = sorted(self.blacks)
        for w, rot in self.white_rotations.items():
            if sorted(rot) != blacks:
                raise ValueError(
                    f"rotation of white {w} is not a permutation of the blacks"
                )

    @property
    def whites(self) -> tuple[int, ...]:
        return tuple(sorted(self.white_rotations))


def _identity_cycle(two_n: int) -> tuple[int, ...]:
    return tuple(range(1, two_n + 1))


def ringel_rotations(n: int) -> RotationsOnly:
    """White rotations of Ringel's nonorientable embedding of K_{n+1,2n}.

    Blacks are 1..2n; whites get ids 2n+1 (a), 2n+2 (b), then the identity
    whites.  All but a and b have the rotation (1 2 ... 2n); for even n the
    two special rotations interleave low and high pairs, for odd n they both
    equal the identity cycle with 2 and 3 swapped.
    """
    if n < 3:
        raise ValueError("ringel_rotations requires n >= 3")
    two_n = 2 * n
    if n % 2 == 0:
        a: list[int] = []
        for i in range(1, n // 2 + 1):
            a += [2 * i - 1, 2 * i]
            a += [two_n - 2 * (i - 1), two_n - 2 * (i - 1) - 1]
        b: list[int] = [1, two_n]
        lows = [(2 * i, 2 * i + 1) for i in range(1, n // 2 + 1)]
        highs = [(two_n - 2 * i + 1, two_n - 2 * i) for i in range(1, n // 2)]
        for i, low in enumerate(lows):
            b += low
            if i < len(highs):
                b += highs[i]
    else:
        a = [1, 3, 2] + list(range(4, two_n + 1))
        b = list(a)
    assert sorted(a) == list(range(1, two_n + 1))
    assert sorted(b) == list(range(1, two_n + 1))
    a_id, b_id = two_n + 1, two_n + 2
    rotations = {a_id: tuple(a), b_id: tuple(b)}
    labels = {a_id: "a", b_id: "b"}
    for i in range(n - 1):
        rotations[two_n + 3 + i] = _identity_cycle(two_n)
    return RotationsOnly(
        blacks=tuple(range(1, two_n + 1)), white_rotations=rotations, labels=labels
    )


def ringel_k36() -> RotationsOnly:
    """The three printed white rotations of Ringel's K_{3,6} embedding."""
    return RotationsOnly(
        blacks=(1, 2, 3, 4, 5, 6),
        white_rotations={
            7: (1, 2, 6, 5, 3, 4),
            8: (1, 6, 2, 3, 5, 4),
            9: (1, 2, 3, 4, 5, 6),
        },
        labels={7: "a", 8: "b", 9: "c"},
    )


def paper_odd_pairing(n: int):
    """The printed odd pairing for ringel_rotations(n), validated.

    Even n pairs {1,3},{2,4},{5,7},{6,8},... and assigns {1,3} to a; odd n
    pairs {1,2},{3,5},{4,6},{7,9},... and assigns {1,2} to a.  All other
    pairs go to identity whites, never to b.
    """
    from quadembed.constructions import OddPairing, validate_odd_pairing

    rot = ringel_rotations(n)
    two_n = 2 * n
    if n % 2 == 0:
        pairs = [(1, 3), (2, 4)]
        k = 5
    else:
        pairs = [(1, 2)]
        k = 3
    while k + 3 <= two_n:
        pairs += [(k, k + 2), (k + 1, k + 3)]
        k += 4
    assert len(pairs) == n
    a_id = two_n + 1
    identity_whites = [w for w in rot.whites if w >= two_n + 3]
    whites = (a_id, *identity_whites[: n - 1])
    pairing = OddPairing(pairs=tuple(pairs), whites=whites)
    validate_odd_pairing(rot.white_rotations, pairing, rot.blacks)
    return pairing


# -- signature completion ------------------------------------------------------


class _BlackState:
    """Partial 2-regular multigraph on whites around one black vertex.

    Degrees never exceed 2 (each white owns exactly two corners per black),
    so components are paths; a cycle may only close with the final edge.
    """

    __slots__ = ("m", "adj", "count")

    def __init__(self, m: int):
        self.m = m
        self.adj: dict[int, list[int]] = {}
        self.count = 0

    def can_add(self, w1: int, w2: int) -> bool:
        a1 = self.adj.get(w1, [])
        if len(a1) >= 2 or len(self.adj.get(w2, [])) >= 2:
            return False
        if self.m > 2 and w2 in a1:
            return False  # parallel adjacency would force a 2-cycle
        if self.count + 1 < self.m and self._connected(w1, w2):
            return False  # would close a cycle early
        return True

    def _connected(self, w1: int, w2: int) -> bool:
        seen = {w1}
        stack = [w1]
        while stack:
            for u in self.adj.get(stack.pop(), []):
                if u == w2:
                    return True
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return False

    def add(self, w1: int, w2: int) -> None:
        self.adj.setdefault(w1, []).append(w2)
        self.adj.setdefault(w2, []).append(w1)
        self.count += 1

    def remove(self, w1: int, w2: int) -> None:
        self.adj[w1].remove(w2)
        self.adj[w2].remove(w1)
        self.count -= 1

    def cycle(self) -> tuple[int, ...]:
        """The full m-cycle, started at the least white, lesser side first."""
        start = min(self.adj)
        first = min(self.adj[start])
        out = [start, first]
        while len(out) < self.m:
            prev, cur = out[-2], out[-1]
            nbrs = list(self.adj[cur])
            nbrs.remove(prev)
            out.append(nbrs[0])
        return tuple(out)


def _matchings(rot: RotationsOnly, budget: int):
    """Yield full corner matchings in canonical order; raise on budget.

    Yields (faces, corners, black_state); the state objects are reused, so
    consumers must read them before resuming the generator.
    """
    whites = rot.whites
    two_n = len(rot.blacks)
    corners: list[tuple[int, int, frozenset[int]]] = []
    for w in whites:
        seq = rot.white_rotations[w]
        for idx in range(two_n):
            corners.append((w, idx, frozenset((seq[idx], seq[(idx + 1) % two_n]))))
    by_pair: dict[frozenset[int], list[int]] = {}
    for cid, (_, _, pair) in enumerate(corners):
        by_pair.setdefault(pair, []).append(cid)
    if any(len(cids) % 2 for cids in by_pair.values()):
        return  # a black pair with an odd corner count can never match up

    black_state = {b: _BlackState(len(whites)) for b in rot.blacks}
    matched: list[int | None] = [None] * len(corners)
    faces: list[tuple[int, int]] = []
    nodes = 0

    def extend():
        nonlocal nodes
        try:
            c = matched.index(None)
        except ValueError:
            yield (tuple(faces), corners, black_state)
            return
        w, _, pair = corners[c]
        i, j = sorted(pair)
        for c2 in by_pair[pair]:
            if c2 <= c or matched[c2] is not None:
                continue
            w2 = corners[c2][0]
            if w2 == w:
                continue
            if not (black_state[i].can_add(w, w2) and black_state[j].can_add(w, w2)):
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExhausted(f"corner matching exceeded {budget} nodes")
            matched[c] = c2
            matched[c2] = c
            black_state[i].add(w, w2)
            black_state[j].add(w, w2)
            faces.append((c, c2))
            yield from extend()
            faces.pop()
            black_state[i].remove(w, w2)
            black_state[j].remove(w, w2)
            matched[c] = None
            matched[c2] = None

    yield from extend()


def _offset(seq: tuple[int, ...], x: int, y: int) -> int:
    """+1 if y directly follows x in the cyclic sequence, else -1."""
    i = seq.index(x)
    if seq[(i + 1) % len(seq)] == y:
        return 1
    assert seq[i - 1] == y, "offset of non-adjacent elements"
    return -1


def _assemble(rot: RotationsOnly, faces, corners, black_state) -> RotationSystem | None:
    """Build the rotation system realizing a corner matching, if coherent."""
    black_rot = {b: black_state[b].cycle() for b in rot.blacks}

    lam: dict[tuple[int, int], int] = {}
    for c, c2 in faces:
        w, idx, _ = corners[c]
        w2 = corners[c2][0]
        seq = rot.white_rotations[w]
        two_n = len(seq)
        # Corner c reads (j_, i_) consecutively, so the quad traversal
        # w -> i_ -> w2 -> j_ -> w starts with step direction +1 at w.
        j_, i_ = seq[idx], seq[(idx + 1) % two_n]
        s1 = 1
        s2 = _offset(black_rot[i_], w, w2)
        s3 = _offset(rot.white_rotations[w2], i_, j_)
        s4 = _offset(black_rot[j_], w2, w)
        for (x, y), value in (
            ((w, i_), s1 * s2),
            ((i_, w2), s2 * s3),
            ((w2, j_), s3 * s4),
            ((j_, w), s4 * s1),
        ):
            key = (min(x, y), max(x, y))
            if key in lam and lam[key] != value:
                return None
            lam[key] = value

    neighbor_rot = {w: rot.white_rotations[w] for w in rot.whites}
    neighbor_rot.update(black_rot)
    twisted = [key for key, value in lam.items() if value == -1]
    return RotationSystem.from_neighbors(neighbor_rot, twisted=twisted, labels=rot.labels)


def _tree_gauge(rs: RotationSystem) -> RotationSystem:
    """Flip vertices so a BFS spanning tree carries signature +1 throughout."""
    root = min(rs.rotations)
    parent_edge: dict[int, int] = {}
    order = [root]
    seen = {root}
    queue = [root]
    while queue:
        v = queue.pop(0)
        for arc in rs.rotations[v]:
            u = rs.arc_head(arc)
            if u not in seen:
                seen.add(u)
                parent_edge[u] = arc >> 1
                order.append(u)
                queue.append(u)
    out = rs
    for v in order[1:]:
        if out.signature[parent_edge[v]] == -1:
            out = vertex_flip(out, v)
    return out


def complete_signatures(
    rot: RotationsOnly,
    require_nonorientable: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> RotationSystem | None:
    """Find black rotations and signatures making the embedding quadrangular.

    Returns the first solution in canonical search order, normalized to a
    spanning-tree gauge (tree edges +1), or None when the search space is
    exhausted.  Raises BudgetExhausted when the node budget runs out, which
    is a different outcome from proven unsatisfiability.
    """
    for faces, corners, black_state in _matchings(rot, budget):
        system = _assemble(rot, faces, corners, black_state)
        if system is None:
            continue
        if not is_quadrangular(system):
            continue
        if require_nonorientable and is_orientable(system):
            continue
        return _tree_gauge(system)
    return None
