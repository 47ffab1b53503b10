"""Planar graphs stored as rotation systems.

A :class:`RotationGraph` maps every vertex to the clockwise cyclic list of its
neighbours.  Faces are traced with the rule ``(u, v) -> (v, succ_v(u))`` where
``succ_v`` is the clockwise successor around ``v``; with this rule bounded
faces are walked counter-clockwise and the infinite face clockwise, so the
ring of a free completion is walked ``1, 2, ..., R``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

Dart = tuple[int, int]


class GraphError(ValueError):
    """Raised when an operation receives a graph it cannot work with."""


class RotationGraph:
    """An embedded simple graph given by clockwise rotations.

    ``outer`` optionally designates the infinite face by one of its darts.
    Instances are treated as immutable.
    """

    __slots__ = ("rot", "outer", "_pos", "__dict__")

    def __init__(self, rot: Mapping[int, Sequence[int]], outer: Dart | None = None):
        self.rot: dict[int, tuple[int, ...]] = {v: tuple(ns) for v, ns in rot.items()}
        self.outer = outer
        self._pos = {v: {w: i for i, w in enumerate(ns)} for v, ns in self.rot.items()}

    # -- basic structure ---------------------------------------------------

    def __repr__(self) -> str:
        return f"RotationGraph(V={len(self.rot)}, E={self.num_edges})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RotationGraph):
            return NotImplemented
        return self._canonical_rot() == other._canonical_rot() and self._outer_face_key() == other._outer_face_key()

    def __hash__(self) -> int:
        return hash((self._canonical_rot(), self._outer_face_key()))

    def _canonical_rot(self):
        out = []
        for v in sorted(self.rot):
            ns = self.rot[v]
            if ns:
                i = ns.index(min(ns))
                ns = ns[i:] + ns[:i]
            out.append((v, ns))
        return tuple(out)

    def _outer_face_key(self):
        if self.outer is None:
            return None
        if self.outer_face is None:
            return frozenset([self.outer])
        return frozenset(self.faces[self.outer_face])

    @property
    def vertices(self) -> list[int]:
        return sorted(self.rot)

    def __contains__(self, v: object) -> bool:
        return v in self.rot

    def __len__(self) -> int:
        return len(self.rot)

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rot[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._pos.get(u, ())

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return sorted({(min(u, v), max(u, v)) for u, ns in self.rot.items() for v in ns})

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def darts(self) -> Iterator[Dart]:
        for u in sorted(self.rot):
            for v in self.rot[u]:
                yield (u, v)

    def succ(self, v: int, u: int) -> int:
        """Clockwise successor of ``u`` around ``v``."""
        ns = self.rot[v]
        return ns[(self._pos[v][u] + 1) % len(ns)]

    def pred(self, v: int, u: int) -> int:
        ns = self.rot[v]
        return ns[(self._pos[v][u] - 1) % len(ns)]

    def next_dart(self, d: Dart) -> Dart:
        u, v = d
        return (v, self.succ(v, u))

    # -- faces -------------------------------------------------------------

    def face_darts(self, d: Dart) -> list[Dart]:
        walk = [d]
        cur = self.next_dart(d)
        while cur != d:
            walk.append(cur)
            cur = self.next_dart(cur)
            if len(walk) > 2 * self.num_edges + 1:
                raise GraphError("face tracing does not close")
        return walk

    @cached_property
    def faces(self) -> list[tuple[Dart, ...]]:
        """Face walks as dart tuples, each starting at its least dart."""
        seen: set[Dart] = set()
        out = []
        for d in self.darts():
            if d in seen:
                continue
            walk = self.face_darts(d)
            seen.update(walk)
            out.append(tuple(walk))
        return out

    @cached_property
    def _face_index(self) -> dict[Dart, int]:
        return {d: i for i, f in enumerate(self.faces) for d in f}

    def face_of(self, d: Dart) -> int:
        return self._face_index[d]

    def num_faces(self) -> int:
        # an isolated vertex has no darts but still bounds one face
        isolated = sum(1 for ns in self.rot.values() if not ns)
        return len(self.faces) + isolated

    @cached_property
    def outer_face(self) -> int | None:
        # an isolated vertex designates its face by the dart (v, v)
        return None if self.outer is None else self._face_index.get(self.outer)

    def is_outer_dart(self, d: Dart) -> bool:
        return self.outer is not None and self._face_index[d] == self.outer_face

    @cached_property
    def _finite_triangle_darts(self) -> frozenset[Dart]:
        out = set()
        for i, f in enumerate(self.faces):
            if len(f) == 3 and i != self.outer_face:
                out.update(f)
        return frozenset(out)

    def face_third(self, x: int, y: int) -> int | None:
        """Third vertex of the bounded triangular face walked ``x -> y -> z``."""
        if (x, y) not in self._finite_triangle_darts:
            return None
        return self.succ(y, x)

    def finite_triangles(self) -> list[tuple[int, int, int]]:
        """Vertex walks of the bounded triangular faces."""
        return [tuple(d[0] for d in f) for i, f in enumerate(self.faces)
                if len(f) == 3 and i != self.outer_face]

    def boundary_vertices(self) -> set[int]:
        if self.outer is None:
            return set()
        if self.outer_face is None:
            return {self.outer[0]}
        return {d[0] for d in self.faces[self.outer_face]}

    # -- derived graphs ----------------------------------------------------

    def induced(self, keep: Iterable[int], outer: Dart | None = None) -> "RotationGraph":
        keep = set(keep)
        rot = {v: [w for w in self.rot[v] if w in keep] for v in self.rot if v in keep}
        return RotationGraph(rot, outer)

    def relabel(self, mapping: Mapping[int, int]) -> "RotationGraph":
        rot = {mapping[v]: [mapping[w] for w in ns] for v, ns in self.rot.items()}
        outer = None if self.outer is None else (mapping[self.outer[0]], mapping[self.outer[1]])
        return RotationGraph(rot, outer)

    def mirror(self) -> "RotationGraph":
        """Reflect the embedding (reverse every rotation)."""
        rot = {v: tuple(reversed(ns)) for v, ns in self.rot.items()}
        outer = None if self.outer is None else (self.outer[1], self.outer[0])
        return RotationGraph(rot, outer)

    def with_outer(self, outer: Dart | None) -> "RotationGraph":
        return RotationGraph(self.rot, outer)

    def distances(self, source: int) -> dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.rot[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def components(self, removed: Iterable[int] = ()) -> list[set[int]]:
        removed = set(removed)
        seen: set[int] = set()
        comps = []
        for s in self.vertices:
            if s in removed or s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.rot[u]:
                    if w not in removed and w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


def from_faces(faces: Iterable[Sequence[int]], outer: Dart | None = None) -> RotationGraph:
    """Build rotations from oriented bounded face walks.

    A face ``(a, b, c)`` is the walk ``a -> b -> c -> a``; around ``b`` this
    means ``c`` follows ``a`` clockwise.  Vertices whose wedges do not close up
    lie on the boundary and their single gap becomes the outer wedge.
    """
    succ: dict[int, dict[int, int]] = {}
    for walk in faces:
        k = len(walk)
        for i in range(k):
            x, y, z = walk[i - 1], walk[i], walk[(i + 1) % k]
            wedge = succ.setdefault(y, {})
            if x in wedge:
                raise GraphError(f"dart {x}->{y} used by two faces")
            wedge[x] = z
    rot = {}
    for v, wedge in succ.items():
        targets = set(wedge.values())
        starts = [u for u in wedge if u not in targets]
        if len(starts) > 1:
            raise GraphError(f"vertex {v} has a pinched neighbourhood")
        start = starts[0] if starts else min(wedge)
        order = [start]
        while order[-1] in wedge and wedge[order[-1]] != start:
            order.append(wedge[order[-1]])
            if len(order) > len(wedge) + 1:
                raise GraphError(f"rotation at {v} does not close")
        rot[v] = order
    return RotationGraph(rot, outer)


from_triangles = from_faces


# -- text format ---------------------------------------------------------------

_LINE = re.compile(r"^\s*(\d+)\s*:\s*((?:\d+\s*)*);\s*$")


def parse_embedded(text: str) -> RotationGraph:
    """Parse ``<id> : <n1> <n2> ... ;`` lines (clockwise neighbours)."""
    rot = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}")
        v = int(m.group(1))
        if v in rot:
            raise GraphError(f"line {lineno}: vertex {v} listed twice")
        rot[v] = [int(x) for x in m.group(2).split()]
    return RotationGraph(rot)


def format_embedded(g: RotationGraph) -> str:
    return "".join(f"{v} : {' '.join(map(str, g.rot[v]))} ;\n" for v in g.vertices)


# -- validation and predicates -------------------------------------------------

@dataclass
class EmbeddingReport:
    valid: bool
    violations: list[str] = field(default_factory=list)
    vertices: int = 0
    edges: int = 0
    faces: int = 0
    components: int = 0


def validate_embedding(g: RotationGraph) -> EmbeddingReport:
    """Check that the rotations describe a planar embedding."""
    violations = []
    for v, ns in g.rot.items():
        if len(set(ns)) != len(ns):
            violations.append(f"duplicate edge-end at vertex {v}")
        for w in ns:
            if w == v:
                violations.append(f"self-loop at vertex {v}")
            elif w not in g.rot:
                violations.append(f"dangling edge-end {v}->{w}")
            elif v not in g.rot[w]:
                violations.append(f"edge-end {v}->{w} has no partner")
    report = EmbeddingReport(valid=False, violations=violations, vertices=len(g))
    if violations:
        return report
    report.edges = g.num_edges
    report.faces = g.num_faces()
    report.components = len(g.components())
    if len(g) - report.edges + report.faces != 2 * report.components:
        violations.append(
            f"Euler failure: V - E + F = {len(g) - report.edges + report.faces}, "
            f"expected {2 * report.components}")
    if g.outer is not None and (g.outer[0] not in g.rot or
                                (g.rot[g.outer[0]] and not g.adjacent(*g.outer))):
        violations.append(f"outer dart {g.outer} is not an edge-end")
    report.valid = not violations
    return report


def _require_valid(g: RotationGraph) -> None:
    report = validate_embedding(g)
    if not report.valid:
        raise GraphError("invalid embedding: " + "; ".join(report.violations))


def is_triangulation(g: RotationGraph) -> bool:
    """Every face, the outer one included, is a triangle."""
    _require_valid(g)
    return len(g) >= 3 and g.is_connected() and all(len(f) == 3 for f in g.faces) \
        and g.num_faces() == len(g.faces)


@dataclass(frozen=True)
class Circuit:
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def _simple_cycles(g: RotationGraph, max_len: int) -> Iterator[tuple[int, ...]]:
    """Each simple cycle once: least vertex first, second < last."""
    for s in g.vertices:
        stack = [(s, (s,))]
        while stack:
            u, path = stack.pop()
            for w in g.rot[u]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    yield path
                elif w > s and w not in path and len(path) < max_len:
                    stack.append((w, path + (w,)))


def _side_vertices(g: RotationGraph, cycle: Sequence[int], limit: int) -> tuple[int, int]:
    """Vertex counts of the two sides of ``cycle``, each capped at ``limit``."""
    on_cycle = set(cycle)
    k = len(cycle)
    seeds: tuple[set[int], set[int]] = (set(), set())
    for i, v in enumerate(cycle):
        prev, nxt = cycle[i - 1], cycle[(i + 1) % k]
        # neighbours strictly clockwise from nxt to prev lie on one side
        w = g.succ(v, nxt)
        while w != prev:
            if w not in on_cycle:
                seeds[0].add(w)
            w = g.succ(v, w)
        w = g.succ(v, prev)
        while w != nxt:
            if w not in on_cycle:
                seeds[1].add(w)
            w = g.succ(v, w)
    counts = []
    for seed in seeds:
        seen = set(seed)
        queue = deque(seed)
        while queue and len(seen) < limit:
            u = queue.popleft()
            for w in g.rot[u]:
                if w not in on_cycle and w not in seen:
                    seen.add(w)
                    queue.append(w)
        counts.append(min(len(seen), limit))
    return counts[0], counts[1]


def short_circuits(g: RotationGraph) -> list[Circuit]:
    """Circuits of length at most 5 separating enough vertices on both sides."""
    if not is_triangulation(g):
        raise GraphError("short_circuits needs a triangulation")
    out = []
    for cyc in _simple_cycles(g, 5):
        need = 2 if len(cyc) == 5 else 1
        a, b = _side_vertices(g, cyc, need)
        if a >= need and b >= need:
            out.append(Circuit(cyc))
    return out


def has_short_circuit(g: RotationGraph) -> bool:
    for cyc in _simple_cycles(g, 5):
        need = 2 if len(cyc) == 5 else 1
        a, b = _side_vertices(g, cyc, need)
        if a >= need and b >= need:
            return True
    return False


def is_internally_six_connected(g: RotationGraph) -> bool:
    if not is_triangulation(g):
        raise GraphError("internal 6-connectivity is defined for triangulations")
    return min(map(g.degree, g.rot)) >= 5 and not has_short_circuit(g)


def induces_circuit(g: RotationGraph, vs: set[int]) -> bool:
    if len(vs) < 3:
        return False
    for v in vs:
        if sum(1 for w in g.rot[v] if w in vs) != 2:
            return False
    sub = g.induced(vs)
    return sub.is_connected()


@dataclass
class SecondNeighborhood:
    graph: RotationGraph
    well_behaved: bool
    first: set[int]
    second: set[int]


def second_neighborhood(g: RotationGraph, v: int) -> SecondNeighborhood:
    if v not in g:
        raise GraphError(f"vertex {v} not in graph")
    dist = g.distances(v)
    first = {w for w, d in dist.items() if d == 1}
    second = {w for w, d in dist.items() if d == 2}
    sub = g.induced({w for w, d in dist.items() if d <= 2})
    ok = induces_circuit(g, first) and induces_circuit(g, second)
    return SecondNeighborhood(sub, ok, first, second)


@dataclass(frozen=True)
class FaceWrap:
    face: int
    ring: Circuit
    phi: dict[int, int]

    def lift(self, coloring: Mapping[int, int]) -> tuple[int, ...]:
        return tuple(coloring[self.phi[i]] for i in self.ring.vertices)


def wrap_ring(g: RotationGraph, face: int | Dart) -> FaceWrap:
    """Wrap a ring around a face; bridges are walked twice."""
    if isinstance(face, tuple):
        if face not in g._face_index:
            raise GraphError(f"{face} is not a dart")
        face = g.face_of(face)
    if not (0 <= face < len(g.faces)):
        raise GraphError(f"face {face} does not exist")
    walk = g.faces[face]
    ring = tuple(range(1, len(walk) + 1))
    phi = {i + 1: d[0] for i, d in enumerate(walk)}
    return FaceWrap(face, Circuit(ring), phi)
