"""Nearly complete bipartite graphs G(m,n,k) and embedding certification.

G(m,n,k) is K_{m,n} (m white, n black vertices) minus k independent edges.
A vertex is saturated when adjacent to every vertex of the other color.
The crosscap lower bound ceil(((m-2)(n-2)-k)/2), clamped at 0 and adjusted
by three exceptional graphs, is the exact nonorientable genus throughout
the supported range; certification checks a claimed embedding against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from quadembed.rotation import (
    RotationSystem,
    SurfaceClass,
    is_orientable,
    is_quadrangular,
    surface_of,
    trace_faces,
)

#: Exceptional exact genus values, keyed by (max(m,n), min(m,n), k).
EXCEPTIONAL_GENUS = {
    (3, 3, 3): 0,
    (5, 4, 4): 2,
    (5, 5, 5): 3,
}


class NcbgError(ValueError):
    """A graph or parameter set is not a valid nearly complete bipartite instance."""


@dataclass(frozen=True)
class NcbgSpec:
    """The triple (m, n, k) together with the deleted matching.

    ``deleted`` holds (white, black) vertex pairs; for canonically built
    graphs these are (i, m+i) for i < k, but classification accepts any
    partial matching, so arbitrary ids may appear here.
    """

    m: int
    n: int
    k: int
    deleted: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.k > min(self.m, self.n) or self.k < 0:
            raise NcbgError(f"k={self.k} must lie in 0..min(m,n)")
        if len(self.deleted) != self.k:
            raise NcbgError("deleted matching must contain exactly k pairs")
        whites = [w for w, _ in self.deleted]
        blacks = [b for _, b in self.deleted]
        if len(set(whites)) != self.k or len(set(blacks)) != self.k:
            raise NcbgError("deleted edges must be pairwise independent")

    @staticmethod
    def canonical(m: int, n: int, k: int) -> NcbgSpec:
        """White ids 0..m-1, black ids m..m+n-1, matching pairs (i, m+i)."""
        return NcbgSpec(m, n, k, tuple((i, m + i) for i in range(k)))

    @property
    def edge_count(self) -> int:
        return self.m * self.n - self.k

    def name(self) -> str:
        return f"G({self.m},{self.n},{self.k})"


@dataclass(frozen=True)
class ColoredGraph:
    """A bipartite simple graph with an explicit white/black coloring."""

    whites: tuple[int, ...]
    blacks: tuple[int, ...]
    edges: frozenset[tuple[int, int]]  # (white, black) pairs

    def degree(self, v: int) -> int:
        side = 0 if v in set(self.whites) else 1
        return sum(1 for e in self.edges if e[side] == v)


def build_graph(spec: NcbgSpec) -> ColoredGraph:
    """The colored graph of a spec over the canonical vertex numbering."""
    whites = tuple(range(spec.m))
    blacks = tuple(range(spec.m, spec.m + spec.n))
    if spec.deleted and not all(
        w in set(whites) and b in set(blacks) for w, b in spec.deleted
    ):
        raise NcbgError("deleted pairs must use canonical vertex ids")
    removed = set(spec.deleted)
    edges = frozenset(
        (w, b) for w in whites for b in blacks if (w, b) not in removed
    )
    return ColoredGraph(whites=whites, blacks=blacks, edges=edges)


class GenusBound(NamedTuple):
    genus: int
    exact: bool  # proven to be the exact nonorientable genus


def genus_lower_bound(m: int, n: int, k: int) -> GenusBound:
    """Crosscap number of G(m,n,k): the Euler bound with three exceptions.

    The exception table is consulted before the ceiling is applied, and the
    result is clamped at 0 (genus 0, the sphere, is allowed).
    """
    if m < 3 or n < 3:
        raise NcbgError(f"genus bound requires m, n >= 3, got ({m}, {n})")
    if not 0 <= k <= min(m, n):
        raise NcbgError(f"k={k} out of range for ({m}, {n})")
    key = (max(m, n), min(m, n), k)
    if key in EXCEPTIONAL_GENUS:
        return GenusBound(EXCEPTIONAL_GENUS[key], True)
    value = max(0, math.ceil(((m - 2) * (n - 2) - k) / 2))
    return GenusBound(value, True)


def bipartition(rs: RotationSystem) -> tuple[set[int], set[int]]:
    """2-color a connected simple system; the least vertex goes white."""
    if not rs.is_connected():
        raise NcbgError("bipartition requires a connected graph")
    color: dict[int, int] = {}
    start = min(rs.rotations)
    color[start] = 0
    stack = [start]
    while stack:
        v = stack.pop()
        for u in rs.neighbors(v):
            if u not in color:
                color[u] = 1 - color[v]
                stack.append(u)
            elif color[u] == color[v]:
                raise NcbgError(f"not bipartite: edge {v}-{u} inside one class")
    whites = {v for v, c in color.items() if c == 0}
    blacks = set(color) - whites
    return whites, blacks


@dataclass(frozen=True)
class Classification:
    spec: NcbgSpec
    whites: frozenset[int]
    blacks: frozenset[int]
    saturated: frozenset[int]

    def unsaturated_blacks(self) -> frozenset[int]:
        return self.blacks - self.saturated

    def unsaturated_whites(self) -> frozenset[int]:
        return self.whites - self.saturated


def classify_embedding(
    rs: RotationSystem, whites: set[int] | None = None
) -> Classification:
    """Confirm the underlying graph is some G(m,n,k) and recover its spec.

    ``whites`` fixes the coloring; when omitted the bipartition is computed
    and the class containing the least vertex id is taken white.  Rejects
    non-bipartite graphs and graphs whose missing edges share a vertex.
    """
    if not rs.is_simple():
        raise NcbgError("classification requires a simple graph")
    if whites is None:
        whites, blacks = bipartition(rs)
    else:
        blacks = set(rs.rotations) - set(whites)
    present = set()
    for u, v in rs.edges:
        w, b = (u, v) if u in whites else (v, u)
        if w not in whites or b not in blacks:
            raise NcbgError(f"edge {u}-{v} is not white-black under this coloring")
        present.add((w, b))
    missing = sorted(
        (w, b) for w in whites for b in blacks if (w, b) not in present
    )
    miss_whites = [w for w, _ in missing]
    miss_blacks = [b for _, b in missing]
    if len(set(miss_whites)) != len(missing) or len(set(miss_blacks)) != len(missing):
        raise NcbgError("missing edges are not a partial matching")
    matched = {v for pair in missing for v in pair}
    saturated = (set(whites) | set(blacks)) - matched
    spec = NcbgSpec(len(whites), len(blacks), len(missing), tuple(missing))
    return Classification(
        spec=spec,
        whites=frozenset(whites),
        blacks=frozenset(blacks),
        saturated=frozenset(saturated),
    )


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of checking an embedding against an expected G(m,n,k).

    ``surface`` is the traced surface; the target is N_h for h equal to the
    genus bound, except that a bound of 0 targets the sphere (the one case
    where a quadrangular embedding is necessarily orientable).
    """

    expected: NcbgSpec
    graph_ok: bool
    graph_detail: str
    quadrangular: bool
    orientable: bool
    face_count: int
    euler_characteristic: int
    surface: SurfaceClass | None
    expected_genus: int
    passed: bool
    classification: Classification | None = field(default=None, repr=False)

    def lines(self) -> list[str]:
        surface = self.surface.notation if self.surface else "unknown"
        return [
            f"graph: {self.expected.name()}",
            f"m: {self.expected.m}",
            f"n: {self.expected.n}",
            f"k: {self.expected.k}",
            f"graph_ok: {str(self.graph_ok).lower()}",
            f"faces: {self.face_count}",
            f"chi: {self.euler_characteristic}",
            f"surface: {surface}",
            f"expected_surface: {'N_%d' % self.expected_genus if self.expected_genus else 'S_0'}",
            f"quadrangular: {str(self.quadrangular).lower()}",
            f"orientable: {str(self.orientable).lower()}",
            f"verdict: {'PASS' if self.passed else 'FAIL'}",
        ]

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def certify(
    rs: RotationSystem,
    expected: NcbgSpec,
    whites: set[int] | None = None,
) -> CertificationReport:
    """Full certification: graph shape, quadrangularity, surface, genus.

    Failures are report entries, not exceptions.  If the computed coloring
    matches the expected (m, n) only after swapping sides, the swap is
    applied before comparing.
    """
    expected_genus = genus_lower_bound(expected.m, expected.n, expected.k).genus
    graph_ok = False
    detail = ""
    classification = None
    try:
        classification = classify_embedding(rs, whites)
        spec = classification.spec
        if (spec.m, spec.n) == (expected.n, expected.m) and spec.m != spec.n:
            classification = classify_embedding(rs, set(classification.blacks))
            spec = classification.spec
        graph_ok = (spec.m, spec.n, spec.k) == (expected.m, expected.n, expected.k)
        detail = spec.name()
    except NcbgError as exc:
        detail = str(exc)

    quadrangular = is_quadrangular(rs)
    orientable = is_orientable(rs)
    faces = len(trace_faces(rs))
    surface = None
    chi = len(rs.rotations) - len(rs.edges) + faces
    if rs.is_connected() and all(len(r) > 0 for r in rs.rotations.values()):
        surface = surface_of(rs)

    if expected_genus == 0:
        surface_ok = surface == SurfaceClass(orientable=True, genus=0)
    else:
        surface_ok = surface == SurfaceClass(orientable=False, genus=expected_genus)
    passed = graph_ok and quadrangular and surface_ok
    return CertificationReport(
        expected=expected,
        graph_ok=graph_ok,
        graph_detail=detail,
        quadrangular=quadrangular,
        orientable=orientable,
        face_count=faces,
        euler_characteristic=chi,
        surface=surface,
        expected_genus=expected_genus,
        passed=passed,
        classification=classification,
    )
