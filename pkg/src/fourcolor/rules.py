"""Discharging rules and charges on triangulations.

Charges are exact: rule weights are integer tenths internally and every
public charge is a :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .embed import distinct_images, find_maps
from .graph import GraphError, RotationGraph, validate_embedding

INF = math.inf


class RuleError(ValueError):
    """A rule violates its defining conditions."""


def tenths(x: Fraction | int) -> int:
    t = Fraction(x) * 10
    if t.denominator != 1:
        raise ValueError(f"{x} is not a multiple of 1/10")
    return int(t)


@dataclass(eq=False)
class DischargingRule:
    name: str
    q10: int
    graph: RotationGraph
    source: int
    sink: int
    lo: dict[int, int]
    hi: dict[int, float]
    warnings: list[str] = field(default_factory=list)

    @property
    def q(self) -> Fraction:
        return Fraction(self.q10, 10)

    def allows(self, v: int, degree: int) -> bool:
        return self.lo[v] <= degree <= self.hi[v]

    def __repr__(self) -> str:
        return f"DischargingRule({self.name!r}, q={self.q}, V={len(self.graph)})"

    def key(self):
        return (self.name, self.q10, self.graph, self.source, self.sink,
                tuple(sorted(self.lo.items())), tuple(sorted(self.hi.items())))

    def __eq__(self, other):
        if not isinstance(other, DischargingRule):
            return NotImplemented
        return self.key() == other.key()


def choose_outer(rot: Mapping[int, Sequence[int]]) -> RotationGraph:
    """Designate the longest face (least dart on ties) as the infinite one."""
    g = RotationGraph(rot)
    best = max(g.faces, key=lambda f: (len(f), [(-a, -b) for a, b in f]))
    return g.with_outer(best[0])


def validate_rule(rule: DischargingRule) -> list[str]:
    g = rule.graph
    errs = []
    rep = validate_embedding(g)
    if not rep.valid:
        return rep.violations
    if not g.is_connected() or len(g) < 2:
        errs.append("rule graph must be connected with at least two vertices")
    if set(rule.lo) != set(g.rot) or set(rule.hi) != set(g.rot):
        errs.append("bounds must be given for exactly the rule's vertices")
        return errs
    for i, f in enumerate(g.faces):
        if i != g.outer_face and len(f) != 3:
            errs.append(f"bounded face through {f[0]} is not a triangle")
    for v in g.vertices:
        if len(g) > 2 and len(g.components({v})) > 1:
            errs.append(f"vertex {v} is a cut vertex")
    if not g.adjacent(rule.source, rule.sink):
        errs.append("source and sink are not adjacent")
    else:
        ds, dt = g.distances(rule.source), g.distances(rule.sink)
        for v in g.vertices:
            if ds.get(v, 99) > 2 or dt.get(v, 99) > 2:
                errs.append(f"vertex {v} is farther than 2 from source or sink")
    boundary = g.boundary_vertices()
    for v in g.vertices:
        d, lo, hi = g.degree(v), rule.lo[v], rule.hi[v]
        if lo < 5:
            errs.append(f"vertex {v}: lower bound {lo} < 5")
        if lo > hi:
            errs.append(f"vertex {v}: empty interval [{lo}, {hi}]")
        if v in boundary:
            if not (d <= lo and hi > d):
                errs.append(f"boundary vertex {v}: need d <= lo and hi > d (d = {d})")
        elif not (lo == hi == d):
            errs.append(f"internal vertex {v}: bounds must equal its degree {d}")
    return errs


def make_rule(name: str, q10: int, rot: Mapping[int, Sequence[int]], source: int, sink: int,
              bounds: Mapping[int, tuple[int, float]]) -> DischargingRule:
    try:
        g = choose_outer(rot)
    except GraphError as exc:
        raise RuleError(f"rule {name}: {exc}") from exc
    rule = DischargingRule(name, q10, g, source, sink,
                           {v: b[0] for v, b in bounds.items()},
                           {v: b[1] for v, b in bounds.items()})
    errs = validate_rule(rule)
    if errs:
        raise RuleError(f"rule {name}: " + "; ".join(errs))
    if q10 not in (1, 2):
        rule.warnings.append(f"rule {name}: q = {q10}/10 is outside {{1/10, 1/5}}")
    return rule


def triangle_rule(q10: int = 1, name: str = "triangle", lo: Sequence[int] = (5, 5, 5),
                  hi: Sequence[float] = (INF, INF, INF)) -> DischargingRule:
    """Three mutually adjacent vertices: source 1, sink 2, third vertex 3."""
    rot = {1: [2, 3], 2: [3, 1], 3: [1, 2]}
    return make_rule(name, q10, rot, 1, 2, {v: (lo[v - 1], hi[v - 1]) for v in (1, 2, 3)})


def diamond_rule(q10: int = 1, name: str = "diamond", lo: Sequence[int] = (5, 5, 5, 5),
                 hi: Sequence[float] = (INF, INF, INF, INF)) -> DischargingRule:
    """Two triangles on the edge source 1 -> sink 2, apexes 3 and 4."""
    rot = {1: [2, 3, 4], 2: [1, 4, 3], 3: [1, 2], 4: [2, 1]}
    return make_rule(name, q10, rot, 1, 2, {v: (lo[v - 1], hi[v - 1]) for v in (1, 2, 3, 4)})


# -- charges on triangulations ---------------------------------------------------

def rule_images(host: RotationGraph, u: int, w: int, rule: DischargingRule,
                degree: Mapping[int, int] | None = None) -> list[dict[int, int]]:
    """Distinct images of ``rule`` with source ``u`` and sink ``w``."""
    deg = degree if degree is not None else {v: host.degree(v) for v in host.rot}
    ok = lambda p, h: rule.lo[p] <= deg[h] <= rule.hi[p]
    return distinct_images(find_maps(rule.graph, host, ok, pins={rule.source: u, rule.sink: w}))


def transfer10(host: RotationGraph, u: int, w: int, rules: Iterable[DischargingRule],
               degree: Mapping[int, int] | None = None) -> int:
    return sum(r.q10 * len(rule_images(host, u, w, r, degree)) for r in rules)


def rule_transfer(t: RotationGraph, u: int, w: int, rules: Iterable[DischargingRule]) -> Fraction:
    if not t.adjacent(u, w):
        raise GraphError(f"{u} and {w} are not adjacent")
    return Fraction(transfer10(t, u, w, list(rules)), 10)


def vertex_charge(t: RotationGraph, u: int, rules: Iterable[DischargingRule]) -> Fraction:
    rules = list(rules)
    total = 10 * (6 - t.degree(u))
    for w in t.rot[u]:
        total -= transfer10(t, u, w, rules)
        total += transfer10(t, w, u, rules)
    return Fraction(total, 10)
