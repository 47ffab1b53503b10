"""Configurations, their free completions and structural screens."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .graph import Circuit, GraphError, RotationGraph, from_faces, validate_embedding


class ConfigurationError(ValueError):
    """A configuration violates one of its defining conditions."""


@dataclass(frozen=True)
class Violation:
    condition: str
    vertex: int | None
    message: str

    def __str__(self) -> str:
        where = "" if self.vertex is None else f" at vertex {self.vertex}"
        return f"condition {self.condition}{where}: {self.message}"


@dataclass
class ConfigReport:
    valid: bool
    violations: list[Violation] = field(default_factory=list)
    ring_size: int | None = None


@dataclass(eq=False)
class Configuration:
    """A near-triangulation ``graph`` (outer dart set) with degree spec ``gamma``."""

    graph: RotationGraph
    gamma: dict[int, int]
    name: str = ""

    def __post_init__(self):
        self.gamma = dict(self.gamma)
        if self.graph.outer is None and len(self.graph) > 0:
            raise ConfigurationError(f"{self.name or 'configuration'}: no outer face designated")

    @property
    def size(self) -> int:
        return len(self.graph)

    def boundary(self) -> set[int]:
        return self.graph.boundary_vertices()

    def key(self):
        """Label-independent identity (the canonical completion)."""
        return canonical_form(free_completion(self))

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.name == other.name and self.key() == other.key()

    def __repr__(self) -> str:
        return f"Configuration({self.name!r}, vertices={len(self.graph)})"


@dataclass(frozen=True, eq=False)
class FreeCompletion:
    graph: RotationGraph
    ring: Circuit
    core_map: dict[int, int]

    @property
    def ring_size(self) -> int:
        return self.ring.length

    @property
    def core(self) -> list[int]:
        return sorted(self.core_map.values())

    def gamma(self) -> dict[int, int]:
        return {v: self.graph.degree(v) for v in self.core}


def _outer_walk(g: RotationGraph) -> list[tuple[int, int]]:
    if g.outer_face is None:
        return []
    return list(g.faces[g.outer_face])


def ring_size_formula(k: Configuration) -> int:
    """Sum of gamma - d - 1 over boundary vertices that are not cut vertices.

    For a single vertex this evaluates to gamma - 1, one less than the ring
    actually built around it; :func:`ring_size` uses the completion instead.
    """
    g = k.graph
    total = 0
    for v in k.boundary():
        if len(g.components({v})) <= 1:
            total += k.gamma[v] - g.degree(v) - 1
    return total


def validate_configuration(k: Configuration) -> ConfigReport:
    g = k.graph
    out: list[Violation] = []
    if len(g) == 0:
        return ConfigReport(False, [Violation("graph", None, "empty configuration")])
    emb = validate_embedding(g)
    if not emb.valid:
        return ConfigReport(False, [Violation("graph", None, m) for m in emb.violations])
    if not g.is_connected():
        out.append(Violation("graph", None, "configuration graph is disconnected"))
    if set(k.gamma) != set(g.rot):
        out.append(Violation("graph", None, "gamma must be given for exactly the vertices"))
        return ConfigReport(False, out)
    for i, f in enumerate(g.faces):
        if i != g.outer_face and len(f) != 3:
            out.append(Violation("graph", f[0][0], f"bounded face of length {len(f)}"))
    boundary = k.boundary()
    for v in g.vertices:
        d, gam = g.degree(v), k.gamma[v]
        comps = len(g.components({v}))
        if comps > 2:
            out.append(Violation("i", v, f"removing it leaves {comps} components"))
        elif comps == 2 and gam != d + 2:
            out.append(Violation("i", v, f"cut vertex needs gamma = d + 2 = {d + 2}, got {gam}"))
        if gam < 5:
            out.append(Violation("ii", v, f"gamma {gam} < 5"))
        if v in boundary and gam <= d:
            out.append(Violation("ii", v, f"boundary vertex needs gamma > d = {d}, got {gam}"))
        if v not in boundary and gam != d:
            out.append(Violation("ii", v, f"internal vertex needs gamma = d = {d}, got {gam}"))
    if out:
        return ConfigReport(False, out)
    formula = ring_size_formula(k)
    if formula < 2:
        out.append(Violation("iii", None, f"ring-size {formula} < 2"))
        return ConfigReport(False, out, formula)
    try:
        s = _build_completion(k)
    except (GraphError, ConfigurationError) as exc:
        out.append(Violation("iii", None, f"completion fails: {exc}"))
        return ConfigReport(False, out, formula)
    ring = s.ring_size
    expected = k.gamma[g.vertices[0]] if len(g) == 1 else formula
    if ring != expected:
        out.append(Violation("iii", None, f"completion ring {ring} != ring-size {expected}"))
    return ConfigReport(not out, out, ring)


def _require(k: Configuration) -> None:
    rep = validate_configuration(k)
    if not rep.valid:
        raise ConfigurationError(f"{k.name or 'configuration'}: " + "; ".join(map(str, rep.violations)))


def ring_size(k: Configuration) -> int:
    _require(k)
    return free_completion(k).ring_size


def _build_completion(k: Configuration) -> FreeCompletion:
    g = k.graph
    nxt = max(g.rot) + 1
    if len(g) == 1:
        v = g.vertices[0]
        ring = list(range(nxt, nxt + k.gamma[v]))
        tris = [(ring[i - 1], v, ring[i]) for i in range(len(ring))]
        return _finish(k, tris, ring)
    walk = _outer_walk(g)
    corners = []
    for i, (a, v) in enumerate(walk):
        b = walk[(i + 1) % len(walk)][1]
        cut = len(g.components({v})) == 2
        corners.append((a, v, b, 1 if cut else k.gamma[v] - g.degree(v)))
    if any(c[3] < 1 for c in corners):
        raise ConfigurationError("boundary vertex without room for the ring")
    # corner i shares its first ring vertex with the last of corner i - 1
    ring, per_corner = _allocate_ring(corners, nxt)
    tris = [tuple(t) for t in g.finite_triangles()]
    for (a, v, b, _), rs in zip(corners, per_corner):
        seq = [a] + rs + [b]
        for x, y in zip(seq, seq[1:]):
            tris.append((x, v, y))
    return _finish(k, tris, ring)


def _allocate_ring(corners, start: int):
    total = sum(c[3] for c in corners) - len(corners)
    if total < 3:
        raise ConfigurationError(f"ring of size {total} would need multiple edges")
    ring = list(range(start, start + total))
    per_corner = []
    pos = 0
    for _, _, _, kk in corners:
        per_corner.append([ring[(pos + j) % total] for j in range(kk)])
        pos += kk - 1
    return ring, per_corner


def _finish(k: Configuration, tris, ring: list[int]) -> FreeCompletion:
    seen = set()
    uniq = []
    for t in tris:
        key = min((t, t[1:] + t[:1], t[2:] + t[:2]))
        if key not in seen:
            seen.add(key)
            uniq.append(t)
    s = from_faces(uniq)
    # every bounded face holds a core vertex, so the outer dart is the one turning into the ring
    ringset = set(ring)
    outer = (ring[0], ring[1]) if s.succ(ring[1], ring[0]) in ringset else (ring[1], ring[0])
    s = s.with_outer(outer)
    rep = validate_embedding(s)
    if not rep.valid:
        raise ConfigurationError("completion is not a simple plane graph: " + "; ".join(rep.violations))
    walk = [d[0] for d in s.faces[s.outer_face]]
    if sorted(walk) != sorted(ring):
        raise ConfigurationError("completion ring is not a circuit")
    for v in k.graph.rot:
        if s.degree(v) != k.gamma[v]:
            raise ConfigurationError(f"vertex {v} reaches degree {s.degree(v)}, not {k.gamma[v]}")
    return _canonical(s, walk, list(k.graph.rot))


def _canonical(s: RotationGraph, walk: list[int], core: list[int]) -> FreeCompletion:
    best = None
    r = len(walk)
    for i in range(r):
        order = walk[i:] + walk[:i]
        label = {v: j + 1 for j, v in enumerate(order)}
        # core vertices numbered in order of discovery around the ring
        for v in order:
            for w in s.rot[v]:
                if w not in label:
                    label[w] = len(label) + 1
        pending = [w for w in core if w not in label]
        while pending:
            for v in list(label):
                for w in s.rot[v]:
                    if w not in label:
                        label[w] = len(label) + 1
            pending = [w for w in core if w not in label]
        rel = s.relabel(label)
        key = rel._canonical_rot()
        if best is None or key < best[0]:
            best = (key, rel, label)
    _, rel, label = best
    return FreeCompletion(rel, Circuit(tuple(range(1, r + 1))), {v: label[v] for v in core})


def free_completion(k: Configuration) -> FreeCompletion:
    _require(k)
    return _build_completion(k)


def canonical_form(s: FreeCompletion):
    return s.graph._canonical_rot()


def core_of(s: FreeCompletion, name: str = "") -> Configuration:
    """The configuration whose free completion is ``s``."""
    core = set(s.core)
    g = s.graph
    sub = g.induced(core)
    outer = None
    for v in sorted(core):
        ring_nbrs = [w for w in g.rot[v] if w not in core]
        if not ring_nbrs:
            continue
        if sub.degree(v) == 0:
            outer = (v, v)
            break
        # the core neighbour just before a ring neighbour, clockwise
        w = ring_nbrs[0]
        while w not in core:
            w = g.pred(v, w)
        outer = (w, v)
        break
    return Configuration(sub.with_outer(outer), {v: g.degree(v) for v in core}, name)


def completion_from_rotations(rot: Mapping[int, list[int]], ring: int) -> FreeCompletion:
    """Rebuild a stored completion from the rotations of its internal vertices."""
    tris = []
    for v, ns in rot.items():
        for i in range(len(ns)):
            tris.append((ns[i - 1], v, ns[i]))
    seen = set()
    uniq = []
    for t in tris:
        key = min((t, t[1:] + t[:1], t[2:] + t[:2]))
        if key not in seen:
            seen.add(key)
            uniq.append(t)
    s = from_faces(uniq)
    for v, ns in rot.items():
        if list(s.rot[v]) != list(ns) and not _same_cycle(s.rot[v], ns):
            raise GraphError(f"vertex {v}: rotation is not closed by triangles")
    missing = [i for i in range(1, ring + 1) if i not in s.rot]
    if missing:
        raise GraphError(f"ring vertices {missing} have no internal neighbour")
    extra = [v for v in s.rot if v > ring and v not in rot]
    if extra:
        raise GraphError(f"vertices {extra} lack a rotation line")
    if ring < 3 or not s.adjacent(1, 2):
        raise GraphError("ring vertices 1 and 2 are not adjacent")
    s = s.with_outer((1, 2))
    rep = validate_embedding(s)
    if not rep.valid:
        raise GraphError("; ".join(rep.violations))
    walk = [d[0] for d in s.faces[s.outer_face]]
    if walk != list(range(1, ring + 1)):
        raise GraphError(f"outer face walk {walk} is not the ring 1..{ring}")
    for i, f in enumerate(s.faces):
        if i != s.outer_face and len(f) != 3:
            raise GraphError(f"face through {f[0]} is not a triangle")
    core = {v: v for v in rot}
    return FreeCompletion(s, Circuit(tuple(range(1, ring + 1))), core)


def _same_cycle(a, b) -> bool:
    a, b = list(a), list(b)
    if len(a) != len(b) or not a:
        return len(a) == len(b)
    i = a.index(b[0]) if b[0] in a else -1
    return i >= 0 and a[i:] + a[:i] == b


def radius(k: Configuration) -> int:
    g = k.graph
    return min(max(g.distances(v).values()) for v in g.vertices)


def structural_screens(k: Configuration) -> list[str]:
    g = k.graph
    warnings = []
    for v in g.vertices:
        if k.gamma[v] > g.degree(v) + 3:
            warnings.append(f"vertex {v}: gamma {k.gamma[v]} > d + 3 (Tutte-Whitney screen)")
    for a, b in g.edges:
        if g.degree(a) == 2 and g.degree(b) == 2 and k.gamma[a] == 5 and k.gamma[b] == 5:
            warnings.append(f"hanging 5-5 pair {a}-{b}")
    r = radius(k)
    if r > 2:
        warnings.append(f"radius {r} > 2")
    return warnings
