"""Dispatching parts: reducibility, hubcaps, symmetry and presentation scripts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cartwheel import (INF, Part, PartError, and_parts, hat, refine, transform,
                        transform_vertex, trivial_part, wheel_graph)
from .configuration import Configuration, radius
from .embed import find_maps
from .rules import DischargingRule

NEG_INF = -math.inf


class Unencodable(ValueError):
    """A rule cannot be laid onto the part geometry."""


class ScriptError(ValueError):
    """A presentation script is malformed (depth, syntax or hubcap shape)."""


# -- rules as parts -------------------------------------------------------------

@dataclass(frozen=True)
class RulePart:
    rule: DischargingRule
    part: Part
    image: tuple[tuple[int, int], ...]  # rule vertex -> part vertex
    inward: bool  # source on spoke 1 and sink at the hub, else the reverse
    sign: int

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(h for _, h in self.image)


def _unfold(rule: DischargingRule, d: int, spokes: dict[int, int | None],
            pins: dict[int, int], sign: int):
    """Map rule triangles onto the wheel; returns (map, None) or (None, stuck dart)."""
    g = wheel_graph(d, spokes)
    m = dict(pins)
    tris = rule.graph.finite_triangles()
    changed = True
    while changed:
        changed = False
        for tri in tris:
            for a, b, c in (tri, tri[1:] + tri[:1], tri[2:] + tri[:2]):
                if a in m and b in m:
                    break
            else:
                continue
            x, y = (m[a], m[b]) if sign > 0 else (m[b], m[a])
            if not g.adjacent(x, y):
                return None, ("conflict", x, y)
            z = g.face_third(x, y)
            if z is None:
                return None, ("open", x, y)
            if c in m:
                if m[c] != z:
                    return None, ("conflict", x, y)
                continue
            if z in m.values():
                return None, ("conflict", x, y)
            m[c] = z
            changed = True
    if len(m) != len(rule.graph):
        return None, ("conflict", None, None)
    for a, b in rule.graph.edges:
        if not g.adjacent(m[a], m[b]):
            return None, ("conflict", m[a], m[b])
    return m, None


def _exact(rule: DischargingRule, v: int) -> int | None:
    return int(rule.lo[v]) if rule.lo[v] == rule.hi[v] else None


def rule_as_parts(rule: DischargingRule, d: int) -> list[RulePart]:
    """Encode ``rule`` with its sink at the hub and with its source at the hub."""
    out = []
    for inward in (True, False):
        hub_v, spoke_v = (rule.sink, rule.source) if inward else (rule.source, rule.sink)
        if not rule.allows(hub_v, d):
            continue
        for sign in (1, -1):
            spokes: dict[int, int | None] = {k: None for k in range(1, d + 1)}
            conflict = False
            while True:
                m, stuck = _unfold(rule, d, spokes, {hub_v: 0, spoke_v: 1}, sign)
                if m is not None:
                    break
                kind, x, y = stuck
                if kind == "conflict":
                    conflict = True
                    break
                inv = {h: p for p, h in _partial(rule, d, spokes, hub_v, spoke_v, sign).items()}
                target = None
                for cand in (y, x):
                    if 1 <= cand <= d and spokes[cand] is None:
                        target = cand
                        break
                if target is None or target not in inv or _exact(rule, inv[target]) is None:
                    raise Unencodable(f"rule {rule.name}: needs the fans of a spoke of "
                                      f"undetermined degree (hub degree {d})")
                spokes[target] = _exact(rule, inv[target])
                if spokes[target] < 5:
                    conflict = True
                    break
            if conflict:
                continue
            # spokes with an exact degree must carry their fans
            for p, h in m.items():
                if 1 <= h <= d and spokes[h] is None and _exact(rule, p) is not None:
                    spokes[h] = _exact(rule, p)
            bounds = {}
            for k in range(1, d + 1):
                bounds[k] = (5, INF) if spokes[k] is None else (spokes[k], spokes[k])
                bounds[hat(d, k)] = (5, INF)
            bad = False
            for p, h in m.items():
                lo, hi = bounds.get(h, (5, INF))
                lo, hi = max(lo, rule.lo[p]), min(hi, rule.hi[p])
                if h == 0:
                    bad |= not (lo <= d <= hi)
                    continue
                if lo > hi:
                    bad = True
                bounds[h] = (lo, hi)
            if bad:
                continue
            try:
                part = Part.make(d, bounds)
            except PartError:
                continue
            out.append(RulePart(rule, part, tuple(sorted(m.items())), inward, sign))
    return out


def _partial(rule, d, spokes, hub_v, spoke_v, sign) -> dict[int, int]:
    """The map built before unfolding got stuck (same propagation, no failure)."""
    g = wheel_graph(d, spokes)
    m = {hub_v: 0, spoke_v: 1}
    tris = rule.graph.finite_triangles()
    changed = True
    while changed:
        changed = False
        for tri in tris:
            for a, b, c in (tri, tri[1:] + tri[:1], tri[2:] + tri[:2]):
                if a in m and b in m and c not in m:
                    x, y = (m[a], m[b]) if sign > 0 else (m[b], m[a])
                    z = g.face_third(x, y) if g.adjacent(x, y) else None
                    if z is not None and z not in m.values():
                        m[c] = z
                        changed = True
                    break
    return m


def check_rules_encodable(rules: Iterable[DischargingRule], degrees=range(5, 12)) -> None:
    for r in rules:
        for d in degrees:
            rule_as_parts(r, d)


# -- configurations in parts ----------------------------------------------------

class RadiusError(ValueError):
    pass


def well_positioned_appearance(k: Configuration, p: Part, strict_radius: bool = True
                               ) -> dict[int, int] | None:
    """An exact-degree, induced, well-positioned image of ``k`` in ``p``."""
    if strict_radius and radius(k) > 2:
        raise RadiusError(f"configuration {k.name} has radius {radius(k)} > 2")
    g = p.graph()
    bounds = p.as_dict()
    ok = lambda a, h: h in bounds and bounds[h][0] == bounds[h][1] == k.gamma[a]
    d = p.d
    for m, _ in find_maps(k.graph, g, ok):
        image = set(m.values())
        if _well_positioned(d, image) and _first_principles(k, g, m):
            return m
    return None


def _well_positioned(d: int, image: set[int]) -> bool:
    for j in range(1, d + 1):
        if hat(d, j - 1) in image and hat(d, j) in image and j not in image:
            return False
    return True


def _first_principles(k: Configuration, g, m: dict[int, int]) -> bool:
    if len(set(m.values())) != len(m):
        return False
    inv = {h: a for a, h in m.items()}
    for a in k.graph.vertices:
        for b in k.graph.vertices:
            if a < b and k.graph.adjacent(a, b) != g.adjacent(m[a], m[b]):
                return False
    return all(h in g.rot for h in inv)


def tau_R(p: Part, configs: Sequence[Configuration], strict_radius: bool = True) -> str | None:
    """Name of the first configuration appearing well-positioned, if any."""
    for k in configs:
        if well_positioned_appearance(k, p, strict_radius) is not None:
            return k.name or "?"
    return None


# -- hubcaps --------------------------------------------------------------------

@dataclass(frozen=True)
class Placement:
    part: Part
    vertices: frozenset[int]
    image: tuple[tuple[int, int], ...]
    q10: int
    key: tuple


def _placements(rules: Sequence[DischargingRule], d: int, spokes: Iterable[int], inward: bool
                ) -> list[Placement]:
    out: dict[tuple, Placement] = {}
    for r in rules:
        for rp in rule_as_parts(r, d):
            if rp.inward != inward:
                continue
            for k in spokes:
                part = transform(rp.part, k - 1, False)
                img = tuple((a, transform_vertex(rp.part, h, k - 1, False)) for a, h in rp.image)
                verts = frozenset(h for _, h in img)
                key = (id(r), verts, k)
                if key not in out:
                    out[key] = Placement(part, verts, img, r.q10, key)
    return list(out.values())


def _forced(a: Part, pl: Placement, rule_graph) -> bool:
    ab = a.as_dict()
    for v, lo, hi in pl.part.bounds:
        if v not in ab:
            return False
        alo, ahi = ab[v]
        if not (lo <= alo and ahi <= hi):
            return False
    g = a.graph()
    inv = {h: p for p, h in pl.image}
    for h in inv:
        for x in g.rot[h]:
            if x in inv and not rule_graph.adjacent(inv[h], inv[x]):
                return False
    d = a.d
    for j in range(1, d + 1):
        if hat(d, j - 1) in inv and hat(d, j) in inv:
            lo, hi = ab[j]
            if lo != hi and lo < 6:
                return False
    return True


@dataclass
class ZetaResult:
    value10: float  # tenths, or -inf when every combination is reducible
    best: tuple = ()
    combos: int = 0

    @property
    def value(self) -> Fraction | float:
        return NEG_INF if self.value10 == NEG_INF else Fraction(int(self.value10), 10)


def zeta_bound(p: Part, u: int, v: int, rules: Sequence[DischargingRule],
               configs: Sequence[Configuration], _cache: dict | None = None,
               strict_radius: bool = True) -> ZetaResult:
    """Upper bound on the net charge sent from spokes ``u``, ``v`` to the hub."""
    d = p.d
    ends = sorted({u, v})
    for k in ends:
        if not 1 <= k <= d:
            raise PartError(f"{k} is not a spoke")
    inward = [pl for pl in _placements(rules, d, ends, True) if and_parts(p, pl.part) is not None]
    outward = _placements(rules, d, ends, False)
    graphs = {id(r): r.graph for r in rules}
    cache = _cache if _cache is not None else {}

    def reducible(a: Part) -> bool:
        if a not in cache:
            cache[a] = tau_R(a, configs, strict_radius) is not None
        return cache[a]

    best = [NEG_INF, ()]
    count = [0]

    def visit(i: int, a: Part, q10: int, chosen: tuple) -> None:
        if reducible(a):
            return  # every refinement stays reducible
        count[0] += 1
        out10 = sum(pl.q10 for pl in outward if _forced(a, pl, graphs[pl.key[0]]))
        val = q10 - out10
        if val > best[0]:
            best[0], best[1] = val, chosen
        for j in range(i, len(inward)):
            b = and_parts(a, inward[j].part)
            if b is not None:
                visit(j + 1, b, q10 + inward[j].q10, chosen + (j,))

    visit(0, p, 0, ())
    return ZetaResult(best[0], best[1], count[0])


@dataclass(frozen=True)
class Triplet:
    u: int
    v: int
    q10: int


def check_hubcap(d: int, hubcap: Sequence[Triplet]) -> None:
    counts = {k: 0 for k in range(1, d + 1)}
    for t in hubcap:
        for k in {t.u, t.v}:
            if k not in counts:
                raise ScriptError(f"hubcap names {k}, which is not a spoke")
            counts[k] += 1
    bad = [k for k, c in counts.items() if c != 2]
    if bad:
        raise ScriptError(f"spokes {bad} do not appear in exactly two triplets")


def floor10_half(total10: int) -> int:
    """floor10(x / 2) in tenths, for x given in tenths."""
    return total10 // 2


@dataclass
class HubcapResult:
    passed: bool
    zetas: list[ZetaResult] = field(default_factory=list)
    arithmetic10: int = 0
    failed: list[int] = field(default_factory=list)


def tau_H(p: Part, hubcap: Sequence[Triplet], rules: Sequence[DischargingRule],
          configs: Sequence[Configuration], cache: dict | None = None,
          strict_radius: bool = True) -> HubcapResult:
    check_hubcap(p.d, hubcap)
    cache = {} if cache is None else cache
    zetas = []
    failed = []
    for i, t in enumerate(hubcap):
        z = zeta_bound(p, t.u, t.v, rules, configs, cache, strict_radius)
        zetas.append(z)
        if z.value10 > t.q10:
            failed.append(i)
    arith = 10 * (6 - p.d) + floor10_half(sum(t.q10 for t in hubcap))
    return HubcapResult(not failed and arith <= 0, zetas, arith, failed)


def tau_S(p: Part, index: int, rotation: int, mirror: bool, history: Sequence[Part]) -> bool:
    if not 0 <= index < len(history):
        raise ScriptError(f"symmetry reference {index} names no dispatched part")
    return transform(p, rotation, mirror) == history[index]


# -- presentation scripts -------------------------------------------------------

@dataclass(frozen=True)
class Line:
    lineno: int
    depth: int
    kind: str
    args: tuple


@dataclass
class PresentationScript:
    d: int
    lines: list[Line]


@dataclass
class LineOutcome:
    lineno: int
    kind: str
    ok: bool
    detail: str = ""


@dataclass
class DispatchReport:
    degree: int
    success: bool
    failed_line: int | None = None
    reason: str = ""
    outcomes: list[LineOutcome] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)


def check_depths(d: int, lines: Sequence[Line]) -> None:
    size = 1
    for ln in lines:
        if ln.depth != size:
            raise ScriptError(f"line {ln.lineno}: depth L{ln.depth} but the stack holds {size}")
        if ln.kind == "H":
            try:
                check_hubcap(d, ln.args)
            except ScriptError as exc:
                raise ScriptError(f"line {ln.lineno}: {exc}") from None
        size += 1 if ln.kind == "C" else -1
    if size != 0:
        raise ScriptError(f"script ends with {size} parts left on the stack")


def _fmt10(x) -> str:
    return "-inf" if x == NEG_INF else str(int(x))


def run_presentation(d: int, script: PresentationScript, configs: Sequence[Configuration],
                     rules: Sequence[DischargingRule], verbose: bool = False,
                     strict_radius: bool = True) -> DispatchReport:
    """Execute ``script`` from the trivial part; ``strict_radius`` rejects wide configurations."""
    if not 5 <= d <= 11:
        raise ScriptError(f"hub degree {d} outside 5..11")
    if script.d != d:
        raise ScriptError(f"script is for hub degree {script.d}, not {d}")
    stack = [trivial_part(d)]
    history: list[Part] = []
    rep = DispatchReport(d, False)
    cache: dict = {}
    for ln in script.lines:
        if ln.depth != len(stack):
            raise ScriptError(f"line {ln.lineno}: depth L{ln.depth} but the stack holds {len(stack)}")
        p = stack[-1]
        ok, detail = True, ""
        if ln.kind == "C":
            m, n = ln.args
            try:
                p1, p2 = refine(p, m, n)
            except PartError as exc:
                ok, detail = False, str(exc)
            else:
                stack[-1] = p2
                stack.append(p1)
                detail = f"{p1.describe()} | {p2.describe()}"
        elif ln.kind == "R":
            name = tau_R(p, configs, strict_radius)
            ok = name is not None
            detail = f"reducible by {name}" if ok else "no configuration appears"
        elif ln.kind == "H":
            res = tau_H(p, ln.args, rules, configs, cache, strict_radius)
            ok = res.passed
            zs = " ".join(f"({t.u} {t.v} zeta={_fmt10(z.value10)} q={t.q10})"
                          for t, z in zip(ln.args, res.zetas))
            detail = f"{zs} 6-d+floor={res.arithmetic10}"
        elif ln.kind == "S":
            idx, rot, mir = ln.args
            try:
                ok = tau_S(p, idx, rot, mir, history)
            except ScriptError as exc:
                ok, detail = False, str(exc)
            else:
                detail = f"symmetric to dispatched part {idx}" if ok else "parts differ"
        else:
            raise ScriptError(f"line {ln.lineno}: unknown kind {ln.kind}")
        rep.outcomes.append(LineOutcome(ln.lineno, ln.kind, ok, detail))
        if verbose:
            rep.trace.append(f"L{ln.depth} {ln.kind} line {ln.lineno} {'ok' if ok else 'FAIL'} "
                             f"part [{p.describe()}] {detail}")
        if not ok:
            rep.failed_line = ln.lineno
            rep.reason = detail
            return rep
        if ln.kind != "C":
            stack.pop()
            history.append(p)
    if stack:
        rep.reason = f"{len(stack)} parts left on the stack"
        return rep
    rep.success = True
    return rep
