"""Appearance of small embedded patterns inside larger embedded graphs.

A map sends every bounded triangular face of the pattern onto a bounded
triangular face of the host, preserving orientation (sign ``+1``) or
reversing it (sign ``-1``).  Triangles are unfolded one at a time from a seed
edge; vertices not reachable through triangles (cut-vertex blocks, bare
edges) are placed by branching over host neighbours.
"""

from __future__ import annotations

from typing import Callable, Iterator, Mapping

from .graph import RotationGraph

VertexTest = Callable[[int, int], bool]


def _third(host: RotationGraph, a: int, b: int, sign: int) -> int | None:
    return host.face_third(a, b) if sign > 0 else host.face_third(b, a)


def find_maps(pattern: RotationGraph, host: RotationGraph, ok: VertexTest | None = None,
              pins: Mapping[int, int] | None = None, signs: tuple[int, ...] = (1, -1),
              induced: bool = True) -> Iterator[tuple[dict[int, int], int]]:
    """Yield ``(map, sign)`` for every appearance of ``pattern`` in ``host``.

    ``ok(p, h)`` filters vertex images, ``pins`` fixes some images in advance.
    The same map may be produced under both signs when the pattern has no
    triangles; callers that count images should deduplicate.
    """
    ok = ok or (lambda p, h: True)
    pins = dict(pins or {})
    tris = pattern.finite_triangles()
    order = pattern.vertices
    if not order:
        return
    for sign in signs:
        if pins:
            starts = [pins]
        else:
            # seed on a triangle vertex when there is one
            p0 = tris[0][0] if tris else order[0]
            starts = [{p0: h} for h in host.vertices]
        for start in starts:
            if any(h not in host or not ok(p, h) for p, h in start.items()):
                continue
            if len(set(start.values())) != len(start):
                continue
            yield from _extend(pattern, host, ok, tris, dict(start), sign, induced)


def _propagate(host: RotationGraph, ok: VertexTest, tris, m: dict[int, int],
               used: set[int], sign: int) -> bool:
    changed = True
    while changed:
        changed = False
        for x, y, z in tris:
            known = [v in m for v in (x, y, z)]
            if sum(known) < 2:
                continue
            # rotate so that the first two are known
            for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                if a in m and b in m:
                    break
            t = _third(host, m[a], m[b], sign)
            if t is None:
                return False
            if c in m:
                if m[c] != t:
                    return False
                continue
            if t in used or not ok(c, t):
                return False
            m[c] = t
            used.add(t)
            changed = True
    return True


def _extend(pattern, host, ok, tris, m, sign, induced):
    used = set(m.values())
    if not _propagate(host, ok, tris, m, used, sign):
        return
    if len(m) == len(pattern):
        if _final_check(pattern, host, m, induced):
            yield m, sign
        return
    # branch on an unplaced neighbour of a placed vertex
    for p in pattern.vertices:
        if p in m:
            continue
        anchor = next((q for q in pattern.rot[p] if q in m), None)
        if anchor is not None:
            break
    else:
        # disconnected pattern: place the next component anywhere
        p = next(v for v in pattern.vertices if v not in m)
        anchor = None
    candidates = host.rot[m[anchor]] if anchor is not None else host.vertices
    for h in candidates:
        if h in used or not ok(p, h):
            continue
        m2 = dict(m)
        m2[p] = h
        yield from _extend(pattern, host, ok, tris, m2, sign, induced)


def _final_check(pattern: RotationGraph, host: RotationGraph, m: Mapping[int, int],
                 induced: bool) -> bool:
    if len(set(m.values())) != len(m):
        return False
    for a, b in pattern.edges:
        if not host.adjacent(m[a], m[b]):
            return False
    if induced:
        inv = {h: p for p, h in m.items()}
        for h in inv:
            for k in host.rot[h]:
                if k in inv and not pattern.adjacent(inv[h], inv[k]):
                    return False
    return True


def distinct_images(maps: Iterator[tuple[dict[int, int], int]]) -> list[dict[int, int]]:
    """Keep one map per image vertex set."""
    seen = set()
    out = []
    for m, _ in maps:
        key = frozenset(m.values())
        if key not in seen:
            seen.add(key)
            out.append(m)
    return out


def appears(pattern: RotationGraph, host: RotationGraph, ok: VertexTest | None = None,
            pins: Mapping[int, int] | None = None, induced: bool = True) -> dict[int, int] | None:
    for m, _ in find_maps(pattern, host, ok, pins, induced=induced):
        return m
    return None
