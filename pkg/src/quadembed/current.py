"""Index-2 current graphs over Z_{2n} and their derived embeddings.

A current graph is an embedded quartic multigraph whose arcs carry values
in Z_{2n} with alpha(e+) = -lambda(e) * alpha(e-).  When the embedding has
exactly two faces whose logs each contain every signed generator +-1, +-3,
..., +-(n-2) exactly once, and every edge touches both faces, the logs
generate a quadrangular embedding of G(n,n,n) on vertex set Z_{2n}: even
vertices read face [0], odd vertices read face [1], and a derived edge is
twisted when its generating edge is traversed twice in the same direction.
The face labeling, the walk directions, and (for edge-ambiguous families)
the twist choice are conventions; derivation tries them all and keeps the
first that certifies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from quadembed.ncbg import NcbgSpec, certify, classify_embedding
from quadembed.ringel import BudgetExhausted, DEFAULT_BUDGET
from quadembed.rotation import (
    FaceWalk,
    RotationSystem,
    trace_faces,
)


class CurrentGraphError(ValueError):
    """Structural problem with a current graph."""


class DeriveError(RuntimeError):
    """No convention produced a valid derived embedding."""


@dataclass(frozen=True)
class CurrentGraph:
    """An embedded multigraph with arc currents in Z_{2n}.

    ``currents[e]`` is alpha on the arc 2e (from the first declared
    endpoint); the reverse arc carries -lambda(e) * alpha mod 2n.
    """

    system: RotationSystem
    n: int
    currents: tuple[int, ...]

    @property
    def group_order(self) -> int:
        return 2 * self.n

    def generators(self) -> tuple[int, ...]:
        return tuple(range(1, self.n - 1, 2))

    def allowed_values(self) -> frozenset[int]:
        gens = self.generators()
        return frozenset(gens) | frozenset((-g) % self.group_order for g in gens)

    def arc_current(self, arc: int) -> int:
        e = arc >> 1
        if arc & 1 == 0:
            return self.currents[e]
        return (-self.system.signature[e] * self.currents[e]) % self.group_order

    def validate(self) -> None:
        self.system.validate()
        if self.n < 5 or self.n % 2 == 0:
            raise CurrentGraphError("current graphs here require odd n >= 5")
        if len(self.currents) != len(self.system.edges):
            raise CurrentGraphError("one current per edge required")
        allowed = self.allowed_values()
        for e, c in enumerate(self.currents):
            if c % 2 == 0:
                raise CurrentGraphError(f"current {c} on edge {e} is even")
            if c % self.group_order not in allowed:
                raise CurrentGraphError(
                    f"current {c} on edge {e} is outside the generator set"
                )


def log_of(cg: CurrentGraph, face: FaceWalk) -> tuple[int, ...]:
    """The log: each traversed arc's current, negated on reversed stretches."""
    return tuple(
        (sign * cg.arc_current(arc)) % cg.group_order for arc, sign in face.states
    )


@dataclass(frozen=True)
class C1C4Report:
    c1_two_faces: bool
    c2_quartic_kirchhoff: bool
    c3_log_contents: bool
    c4_edges_both_faces: bool
    detail: str = ""

    @property
    def passed(self) -> bool:
        return (
            self.c1_two_faces
            and self.c2_quartic_kirchhoff
            and self.c3_log_contents
            and self.c4_edges_both_faces
        )

    def lines(self) -> list[str]:
        return [
            f"C1_two_faces: {str(self.c1_two_faces).lower()}",
            f"C2_quartic_kirchhoff: {str(self.c2_quartic_kirchhoff).lower()}",
            f"C3_log_contents: {str(self.c3_log_contents).lower()}",
            f"C4_edges_both_faces: {str(self.c4_edges_both_faces).lower()}",
            f"verdict: {'PASS' if self.passed else 'FAIL'}",
        ]


def verify_c1_c4(cg: CurrentGraph) -> C1C4Report:
    """Check the four index-2 properties; failures land in the report."""
    cg.validate()
    sys = cg.system
    faces = trace_faces(sys)
    c1 = len(faces) == 2

    c2 = all(len(rot) == 4 for rot in sys.rotations.values())
    if c2:
        for v, rot in sys.rotations.items():
            if sum(cg.arc_current(a) for a in rot) % cg.group_order != 0:
                c2 = False
                break

    c3 = False
    c4 = False
    if c1:
        want = cg.allowed_values()
        logs = [log_of(cg, f) for f in faces]
        c3 = all(
            len(log) == len(want) and set(log) == want and len(set(log)) == len(log)
            for log in logs
        )
        per_face_edges = [sorted(arc >> 1 for arc, _ in f.states) for f in faces]
        all_edges = list(range(len(sys.edges)))
        c4 = per_face_edges[0] == all_edges and per_face_edges[1] == all_edges
    return C1C4Report(
        c1_two_faces=c1,
        c2_quartic_kirchhoff=c2,
        c3_log_contents=c3,
        c4_edges_both_faces=c4,
    )


def mirror_walk(rs: RotationSystem, face: FaceWalk) -> FaceWalk:
    """The same face traversed in the opposite direction."""
    states = tuple(
        (arc ^ 1, -sign * rs.signature[arc >> 1]) for arc, sign in reversed(face.states)
    )
    return FaceWalk(
        states=states, vertices=tuple(rs.arc_tail(a) for a, _ in states)
    )


def derive_embedding(
    cg: CurrentGraph, face0: int | None = None
) -> tuple[RotationSystem, frozenset[int]]:
    """The derived embedding on Z_{2n}: a quadrangular G(n,n,n), plus whites.

    Even vertices take their rotation from the log of face [0], odd from
    face [1]; the derived edge family of difference c is twisted when its
    generating current-graph edge is traversed twice in the same direction.
    All labeling/direction conventions (and both twist choices for families
    whose two slots fall on different edges) are tried; the first derived
    system that validates as a quadrangular G(n,n,n) wins.  ``face0`` pins
    the face-labeling convention when given.
    """
    report = verify_c1_c4(cg)
    if not report.passed:
        raise CurrentGraphError(f"current graph fails (C1)-(C4): {report.lines()}")
    order = cg.group_order
    faces = trace_faces(cg.system)
    assignments = (0, 1) if face0 is None else (face0,)
    for assign, flip0, flip1 in itertools.product(assignments, (False, True), (False, True)):
        walk0 = faces[assign]
        walk1 = faces[1 - assign]
        if flip0:
            walk0 = mirror_walk(cg.system, walk0)
        if flip1:
            walk1 = mirror_walk(cg.system, walk1)
        log0 = [(s * cg.arc_current(a)) % order for a, s in walk0.states]
        log1 = [(s * cg.arc_current(a)) % order for a, s in walk1.states]

        forced: dict[int, bool] = {}
        free: list[int] = []
        for c in sorted(set(log0)):
            p = log0.index(c)
            q = log1.index((-c) % order)
            arc_p = walk0.states[p][0]
            arc_q = walk1.states[q][0]
            if arc_p >> 1 == arc_q >> 1:
                forced[c] = arc_p == arc_q  # same arc twice = same direction
            else:
                free.append(c)

        for combo in itertools.product((False, True), repeat=len(free)):
            twisted_family = dict(forced)
            twisted_family.update(dict(zip(free, combo)))
            rs = _build_derived(order, log0, log1, twisted_family)
            if rs is not None and _derived_is_valid(rs, cg.n):
                return rs, frozenset(range(0, order, 2))
    raise DeriveError(
        "no labeling/direction/twist convention yields a valid "
        f"quadrangular G({cg.n},{cg.n},{cg.n})"
    )


def _build_derived(
    order: int, log0: list[int], log1: list[int], twisted_family: dict[int, bool]
) -> RotationSystem | None:
    rotations: dict[int, tuple[int, ...]] = {}
    for v in range(0, order, 2):
        rotations[v] = tuple((v + c) % order for c in log0)
    for v in range(1, order, 2):
        rotations[v] = tuple((v + c) % order for c in log1)
    twisted = [
        (v, (v + c) % order)
        for v in range(0, order, 2)
        for c, twist in twisted_family.items()
        if twist
    ]
    try:
        return RotationSystem.from_neighbors(rotations, twisted=twisted)
    except Exception:
        return None


def _derived_is_valid(rs: RotationSystem, n: int) -> bool:
    from quadembed.rotation import is_quadrangular

    if not is_quadrangular(rs):
        return False
    try:
        cls = classify_embedding(rs, whites=set(range(0, 2 * n, 2)))
    except Exception:
        return False
    if (cls.spec.m, cls.spec.n, cls.spec.k) != (n, n, n):
        return False
    return all((w + n) % (2 * n) == b for w, b in cls.spec.deleted)


def certify_derived(cg: CurrentGraph):
    """Derive and fully certify: nonorientable quadrangular G(n,n,n)."""
    rs, whites = derive_embedding(cg)
    n = cg.n
    report = certify(rs, NcbgSpec.canonical(n, n, n), whites=set(whites))
    return rs, whites, report


# -- exhaustive search ---------------------------------------------------------


def _quartic_multigraphs(v_count: int):
    """Connected 4-regular multigraphs (loops allowed), one per isomorphism class.

    Yields symmetric multiplicity matrices; diagonal entries count loops
    (each loop adds 2 to the degree).
    """
    pairs = [(i, j) for i in range(v_count) for j in range(i, v_count)]
    seen: set[tuple[int, ...]] = set()

    def canonical(mat: list[list[int]]) -> tuple[int, ...]:
        best = None
        for perm in itertools.permutations(range(v_count)):
            key = tuple(
                mat[perm[i]][perm[j]] for i in range(v_count) for j in range(i, v_count)
            )
            if best is None or key < best:
                best = key
        return best

    def connected(mat: list[list[int]]) -> bool:
        seen_v = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in range(v_count):
                if y != x and mat[x][y] and y not in seen_v:
                    seen_v.add(y)
                    stack.append(y)
        return len(seen_v) == v_count

    mat = [[0] * v_count for _ in range(v_count)]
    degree = [0] * v_count

    def rec(idx: int):
        if idx == len(pairs):
            if all(d == 4 for d in degree) and connected(mat):
                key = canonical(mat)
                if key not in seen:
                    seen.add(key)
                    yield [row[:] for row in mat]
            return
        i, j = pairs[idx]
        unit = 2 if i == j else 1
        max_add = min((4 - degree[i]) // unit, 4 if i == j else 4 - degree[j])
        for k in range(max_add + 1):
            mat[i][j] += k
            mat[j][i] = mat[i][j]
            degree[i] += k * unit
            if i != j:
                degree[j] += k
            yield from rec(idx + 1)
            mat[i][j] -= k
            mat[j][i] = mat[i][j]
            degree[i] -= k * unit
            if i != j:
                degree[j] -= k

    yield from rec(0)


def _matrix_to_edges(mat: list[list[int]]) -> list[tuple[int, int]]:
    edges: list[tuple[int, int]] = []
    for i in range(len(mat)):
        for j in range(i, len(mat)):
            count = mat[i][j] if i != j else mat[i][i]
            edges.extend([(i, j)] * count)
    return sorted(edges)


def _rotation_choices(edges: list[tuple[int, int]], v: int):
    """All cyclic orders of v's darts, first dart pinned for canonicity."""
    darts = []
    for e, (a, b) in enumerate(edges):
        if a == v:
            darts.append(2 * e)
        if b == v:
            darts.append(2 * e + 1)
    first, rest = darts[0], darts[1:]
    for perm in itertools.permutations(rest):
        yield (first, *perm)


def _free_signature_masks(edges: list[tuple[int, int]], v_count: int):
    """Spanning-tree gauge: tree edges pinned to +1, the rest enumerated."""
    parent_known = {0}
    tree: set[int] = set()
    changed = True
    while changed:
        changed = False
        for e, (a, b) in enumerate(edges):
            if a == b or e in tree:
                continue
            if (a in parent_known) != (b in parent_known):
                tree.add(e)
                parent_known.update((a, b))
                changed = True
    free = [e for e in range(len(edges)) if e not in tree]
    for bits in range(1 << len(free)):
        sig = [1] * len(edges)
        for i, e in enumerate(free):
            if bits >> i & 1:
                sig[e] = -1
        yield tuple(sig)


def _assign_currents(cg_sys: RotationSystem, n: int, faces, budget_state):
    """Backtrack over edge currents under Kirchhoff and log-content pruning."""
    order = 2 * n
    gens = list(range(1, n - 1, 2))
    values = sorted(set(gens) | {(-g) % order for g in gens})
    edge_count = len(cg_sys.edges)

    # slot_factor[e] lists (face index, +-1 coefficient): traversing arc 2e
    # with sign s contributes s * alpha(e) to that face's log, the reverse
    # arc contributes -s * lambda(e) * alpha(e).
    slot_factor: list[list[tuple[int, int]]] = [[] for _ in range(edge_count)]
    for fi, face in enumerate(faces):
        for arc, sign in face.states:
            e = arc >> 1
            coef = sign if arc & 1 == 0 else -sign * cg_sys.signature[e]
            slot_factor[e].append((fi, coef))
    # each edge has exactly one slot per face (C4 pre-checked)

    vertex_slots: dict[int, list[tuple[int, int]]] = {}
    for v, rot in cg_sys.rotations.items():
        entries = []
        for a in rot:
            e = a >> 1
            coef = 1 if a & 1 == 0 else -cg_sys.signature[e]
            entries.append((e, coef))
        vertex_slots[v] = entries

    edge_vertices: list[list[int]] = [[] for _ in range(edge_count)]
    for v, entries in vertex_slots.items():
        for e, _ in entries:
            if v not in edge_vertices[e]:
                edge_vertices[e].append(v)

    currents = [0] * edge_count
    used = [set(), set()]
    abs_count: dict[int, int] = {}

    def vertex_complete_ok(v: int) -> bool:
        total = 0
        for e, coef in vertex_slots[v]:
            if currents[e] == 0:
                return True  # not yet complete
            total += coef * currents[e]
        return total % order == 0

    def rec(e: int):
        budget_state[0] += 1
        if budget_state[0] > budget_state[1]:
            raise BudgetExhausted("current assignment budget exhausted")
        if e == edge_count:
            yield tuple(currents)
            return
        for val in values:
            a = min(val, order - val)
            if abs_count.get(a, 0) >= 2:
                continue
            entries = [(fi, (coef * val) % order) for fi, coef in slot_factor[e]]
            if any(x in used[fi] for fi, x in entries):
                continue
            currents[e] = val
            abs_count[a] = abs_count.get(a, 0) + 1
            for fi, x in entries:
                used[fi].add(x)
            if all(vertex_complete_ok(v) for v in edge_vertices[e]):
                yield from rec(e + 1)
            for fi, x in entries:
                used[fi].discard(x)
            abs_count[a] -= 1
            currents[e] = 0

    yield from rec(0)


def search_current_graphs(
    n: int, budget: int = DEFAULT_BUDGET
) -> CurrentGraph | None:
    """First current graph passing (C1)-(C4) whose derived embedding certifies.

    Exhausts quartic multigraphs on (n-1)/2 vertices with rotations,
    tree-gauged signatures, and generator currents, in canonical order.
    Returns None when the space is exhausted; raises BudgetExhausted when
    the node budget runs out first.
    """
    if n % 2 == 0 or n < 7:
        raise CurrentGraphError("search requires odd n >= 7")
    v_count = (n - 1) // 2
    budget_state = [0, budget]
    for mat in _quartic_multigraphs(v_count):
        edges = _matrix_to_edges(mat)
        rotation_space = [list(_rotation_choices(edges, v)) for v in range(v_count)]
        for rots in itertools.product(*rotation_space):
            for sig in _free_signature_masks(edges, v_count):
                budget_state[0] += 1
                if budget_state[0] > budget_state[1]:
                    raise BudgetExhausted("embedding enumeration budget exhausted")
                sys = RotationSystem(
                    edges=tuple(edges),
                    rotations={v: rots[v] for v in range(v_count)},
                    signature=sig,
                )
                faces = trace_faces(sys)
                if len(faces) != 2:
                    continue
                all_edges = list(range(len(edges)))
                if any(
                    sorted(arc >> 1 for arc, _ in f.states) != all_edges for f in faces
                ):
                    continue
                for currents in _assign_currents(sys, n, faces, budget_state):
                    cg = CurrentGraph(system=sys, n=n, currents=currents)
                    if not verify_c1_c4(cg).passed:
                        continue
                    try:
                        _, _, report = certify_derived(cg)
                    except DeriveError:
                        continue
                    if report.passed:
                        return cg
    return None


# -- text format ---------------------------------------------------------------


class CurrentGraphFormatError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def serialize_current_graph(cg: CurrentGraph) -> str:
    """Deterministic text form; rotations start at their least dart token."""
    sys = cg.system
    lines = [f"currentgraph n={cg.n}", "edges:"]
    for e, (u, v) in enumerate(sys.edges):
        twisted = 1 if sys.signature[e] == -1 else 0
        lines.append(f"e{e}: {u} {v} current={cg.currents[e]} twisted={twisted}")
    for v in sys.vertices:
        rot = sys.rotations[v]
        least = min(range(len(rot)), key=lambda i: rot[i])
        ordered = rot[least:] + rot[:least]
        tokens = " ".join(f"e{a >> 1}{'+' if a & 1 == 0 else '-'}" for a in ordered)
        lines.append(f"rot {v}: {tokens}")
    return "\n".join(lines) + "\n"


def parse_current_graph(text: str) -> CurrentGraph:
    """Parse the current graph text format with line diagnostics."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("currentgraph n="):
        raise CurrentGraphFormatError(1, "expected header 'currentgraph n=<n>'")
    try:
        n = int(lines[0].split("=", 1)[1])
    except ValueError:
        raise CurrentGraphFormatError(1, "n must be an integer") from None
    if len(lines) < 2 or lines[1].strip() != "edges:":
        raise CurrentGraphFormatError(2, "expected 'edges:' section")
    edges: list[tuple[int, int]] = []
    currents: list[int] = []
    signature: list[int] = []
    rotations: dict[int, tuple[int, ...]] = {}
    in_edges = True
    for line_no, raw in enumerate(lines[2:], start=3):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("rot "):
            in_edges = False
            head, _, tail = line.partition(":")
            try:
                v = int(head[4:])
            except ValueError:
                raise CurrentGraphFormatError(line_no, "bad vertex id") from None
            if v < 0:
                raise CurrentGraphFormatError(line_no, "negative vertex id")
            arcs = []
            for token in tail.split():
                if not token.startswith("e") or token[-1] not in "+-":
                    raise CurrentGraphFormatError(line_no, f"bad dart token {token!r}")
                try:
                    e = int(token[1:-1])
                except ValueError:
                    raise CurrentGraphFormatError(line_no, f"bad dart token {token!r}") from None
                if not 0 <= e < len(edges):
                    raise CurrentGraphFormatError(line_no, f"unknown edge in {token!r}")
                arcs.append(2 * e if token[-1] == "+" else 2 * e + 1)
            if v in rotations:
                raise CurrentGraphFormatError(line_no, f"duplicate rotation for {v}")
            rotations[v] = tuple(arcs)
        elif in_edges:
            head, _, tail = line.partition(":")
            if not head.startswith("e"):
                raise CurrentGraphFormatError(line_no, "expected edge line 'e<k>: ...'")
            try:
                e = int(head[1:])
            except ValueError:
                raise CurrentGraphFormatError(line_no, "bad edge id") from None
            if e != len(edges):
                raise CurrentGraphFormatError(line_no, "edges must be declared in order")
            fields = tail.split()
            if len(fields) != 4:
                raise CurrentGraphFormatError(
                    line_no, "expected '<u> <v> current=<c> twisted=<0|1>'"
                )
            try:
                u, v = int(fields[0]), int(fields[1])
            except ValueError:
                raise CurrentGraphFormatError(line_no, "bad endpoint") from None
            if u < 0 or v < 0:
                raise CurrentGraphFormatError(line_no, "negative vertex id")
            if not fields[2].startswith("current="):
                raise CurrentGraphFormatError(line_no, "missing current=")
            if not fields[3].startswith("twisted="):
                raise CurrentGraphFormatError(line_no, "missing twisted=")
            try:
                c = int(fields[2].split("=", 1)[1])
                tw = int(fields[3].split("=", 1)[1])
            except ValueError:
                raise CurrentGraphFormatError(line_no, "bad current/twisted value") from None
            if c % 2 == 0:
                raise CurrentGraphFormatError(line_no, f"even current {c}")
            if tw not in (0, 1):
                raise CurrentGraphFormatError(line_no, "twisted must be 0 or 1")
            edges.append((u, v))
            currents.append(c % (2 * n))
            signature.append(-1 if tw else 1)
        else:
            raise CurrentGraphFormatError(line_no, f"unexpected line {line!r}")
    system = RotationSystem(
        edges=tuple(edges),
        rotations=rotations,
        signature=tuple(signature),
    )
    cg = CurrentGraph(system=system, n=n, currents=tuple(currents))
    try:
        cg.validate()
    except Exception as exc:
        raise CurrentGraphFormatError(0, f"structural validation failed: {exc}") from exc
    return cg
