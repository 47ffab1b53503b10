"""Small planar graphs for tests and oracles.

Everything here is deterministic given a :class:`random.Random`.
"""

from __future__ import annotations

import random
from typing import Sequence

from .graph import RotationGraph, from_faces, has_short_circuit, is_triangulation

Triangle = tuple[int, int, int]


def icosahedron_triangles() -> list[Triangle]:
    # 0 on top, 1..5 upper ring, 6..10 lower ring, 11 at the bottom
    tris = []
    for i in range(5):
        u, u2 = 1 + i, 1 + (i + 1) % 5
        low, low2 = 6 + i, 6 + (i + 1) % 5
        tris += [(0, u, u2), (u, low, u2), (u2, low, low2), (11, low2, low)]
    return tris


def icosahedron() -> RotationGraph:
    return from_faces(icosahedron_triangles())


def octahedron() -> RotationGraph:
    tris = []
    for i in range(4):
        a, b = 1 + i, 1 + (i + 1) % 4
        tris += [(0, a, b), (5, b, a)]
    return from_faces(tris)


def cube() -> RotationGraph:
    top, bot = [0, 1, 2, 3], [4, 5, 6, 7]
    faces = [tuple(top), tuple(reversed(bot))]
    for i in range(4):
        j = (i + 1) % 4
        faces.append((top[j], top[i], bot[i], bot[j]))
    return from_faces(faces)


def subdivide(triangles: Sequence[Triangle]) -> list[Triangle]:
    """Split every triangle into four; new vertices get fresh ids."""
    nxt = max(max(t) for t in triangles) + 1
    mid: dict[frozenset[int], int] = {}

    def m(a: int, b: int) -> int:
        nonlocal nxt
        key = frozenset((a, b))
        if key not in mid:
            mid[key] = nxt
            nxt += 1
        return mid[key]

    out = []
    for a, b, c in triangles:
        ab, bc, ca = m(a, b), m(b, c), m(c, a)
        out += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
    return out


def _degrees(tris: set[Triangle]) -> dict[int, int]:
    deg: dict[int, int] = {}
    for t in tris:
        for v in t:
            deg[v] = deg.get(v, 0) + 1
    return deg


def _rotate(t: Triangle, v: int) -> Triangle:
    i = t.index(v)
    return t[i:] + t[:i]  # type: ignore[return-value]


def flip_edge(tris: set[Triangle], a: int, b: int) -> set[Triangle] | None:
    """Flip edge ab; returns None if it would create a multi-edge."""
    t1 = next((t for t in tris if a in t and _rotate(t, a)[1] == b), None)
    t2 = next((t for t in tris if b in t and _rotate(t, b)[1] == a), None)
    if t1 is None or t2 is None:
        return None
    c = _rotate(t1, a)[2]
    e = _rotate(t2, b)[2]
    if c == e or any(c in t and e in t for t in tris):
        return None
    out = set(tris) - {t1, t2}
    out |= {(a, e, c), (e, b, c)}
    return out


def split_vertex(tris: set[Triangle], v: int, i: int, j: int) -> set[Triangle]:
    """Split ``v``: a new vertex takes the neighbours ``n_i..n_j`` of ``v``."""
    g = from_faces(tris)
    ns = g.rot[v]
    d = len(ns)
    arc = [ns[(i + k) % d] for k in range((j - i) % d + 1)]
    new = max(g.rot) + 1
    out = set(tris)
    for x, y in zip(arc, arc[1:]):
        out.discard(_find(out, x, v, y))
        out.add((x, new, y))
    out |= {(new, v, arc[-1]), (arc[0], v, new)}
    return out


def _find(tris: set[Triangle], x: int, y: int, z: int) -> Triangle:
    for t in ((x, y, z), (y, z, x), (z, x, y)):
        if t in tris:
            return t
    raise KeyError((x, y, z))


def random_triangulation(rng: random.Random, moves: int = 20, splits: int = 6,
                         attempts: int = 200) -> RotationGraph:
    """A random internally 6-connected triangulation.

    Starts from the once-subdivided icosahedron (42 vertices) and applies
    random vertex splits and edge flips that keep the minimum degree at 5;
    moves creating short circuits are rejected.
    """
    tris = set(subdivide(icosahedron_triangles()))
    done = 0
    for _ in range(attempts):
        if done >= moves:
            break
        deg = _degrees(tris)
        if splits and rng.random() < 0.4:
            big = sorted(v for v, k in deg.items() if k >= 6)
            if not big:
                continue
            v = rng.choice(big)
            d = deg[v]
            # both halves end with degree span + 2 and d - span + 2
            span = rng.randint(3, d - 3)
            i = rng.randrange(d)
            cand = split_vertex(tris, v, i, (i + span) % d)
        else:
            edges = sorted({(min(a, b), max(a, b)) for t in tris for a, b in zip(t, t[1:] + t[:1])})
            a, b = rng.choice(edges)
            if deg[a] <= 5 or deg[b] <= 5:
                continue
            cand = flip_edge(tris, a, b)
            if cand is None:
                continue
        g = from_faces(cand)
        if min(map(g.degree, g.rot)) < 5 or has_short_circuit(g):
            continue
        tris = cand
        done += 1
    g = from_faces(tris)
    assert is_triangulation(g)
    return g


def random_planar_with_ring(rng: random.Random, ring: int, internal: int):
    """A near-triangulation bounded by a ``ring``-cycle with ``internal`` inside.

    Returns ``(graph, ring_vertices)`` with ring vertices ``1..ring`` in walk
    order of the outer face.  Inner faces are triangles; some chords may
    also be dropped so that not every face is a triangle.
    """
    # begin with a fan triangulation of the ring polygon, then insert vertices
    tris = {(1, k, k + 1) for k in range(2, ring)}
    nxt = ring + 1
    for _ in range(internal):
        t = rng.choice(sorted(tris))
        a, b, c = t
        tris.discard(t)
        tris |= {(a, b, nxt), (b, c, nxt), (c, a, nxt)}
        nxt += 1
    for _ in range(3 * (ring + internal)):
        edges = sorted({(min(a, b), max(a, b)) for t in tris for a, b in zip(t, t[1:] + t[:1])})
        a, b = rng.choice(edges)
        if a <= ring and b <= ring and (b - a) % ring in (1, ring - 1):
            continue  # ring edge
        cand = flip_edge(tris, a, b)
        if cand is not None:
            tris = cand
    g = from_faces(tris)
    # bounded faces walk counter-clockwise, so 1 -> ring on the outer face
    outer = (1, ring)
    g = g.with_outer(outer)
    if rng.random() < 0.5:
        # drop a random non-ring edge to get a non-triangular face
        inner = [e for e in g.edges if not (e[0] <= ring and e[1] <= ring and
                                            (e[1] - e[0]) % ring in (1, ring - 1))]
        if inner:
            a, b = rng.choice(inner)
            rot = {v: [w for w in ns if (v, w) not in ((a, b), (b, a))] for v, ns in g.rot.items()}
            h = RotationGraph(rot, outer)
            if h.is_connected():
                g = h
    return g, list(range(1, ring + 1))
