"""Bounding the charge a vertex of degree >= 12 can receive across one edge."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cartwheel import (INF, Cartwheel, Part, PartError, and_parts, cartwheel_transfer10,
                        config_in_cartwheel, make_cartwheel, trivial_part, wheel_graph)
from .configuration import Configuration
from .dispatch import rule_as_parts, tau_R
from .graph import format_embedded
from .rules import DischargingRule

SINK_MIN = 12
WITNESS_TRIES = 4096


@dataclass
class Scene:
    """A cartwheel around the source ``0`` with the sink on spoke ``1``."""

    wheel: Cartwheel
    part: Part
    placements: list[str] = field(default_factory=list)

    def dump(self) -> str:
        lines = format_embedded(self.wheel.graph).splitlines()
        lines += [f"deg {v} {g}" for v, g in sorted(self.wheel.gamma.items())]
        return "\n".join(lines)


@dataclass
class EdgeBound:
    degree: int
    bound10: int
    witness: Scene | None
    reevaluated10: int | None

    @property
    def bound(self) -> Fraction:
        return Fraction(self.bound10, 10)


def wildcard_cap(rules: Sequence[DischargingRule], screen: Sequence[Configuration]) -> int:
    """One more than every finite degree bound named by a rule or a screen."""
    top = 8
    for r in rules:
        for v in r.graph.vertices:
            top = max(top, r.lo[v])
            if r.hi[v] != INF:
                top = max(top, int(r.hi[v]))
    for k in screen:
        top = max(top, *k.gamma.values())
    return int(top) + 1


def _scene_part(d: int) -> Part:
    b = trivial_part(d).as_dict()
    b[1] = (SINK_MIN, INF)
    return Part.make(d, b)


def _witness(a: Part, cap: int, rules, screen) -> tuple[Cartwheel, int] | None:
    """A cartwheel fitting ``a`` with no screen appearance, and its edge transfer."""
    b = a.as_dict()
    spokes = {}
    for k in range(1, a.d + 1):
        lo, hi = b[k]
        far = max(int(lo), cap) if hi == INF else int(hi)
        spokes[k] = sorted({far, int(lo)}, key=lambda x: x != far)
    for choice in itertools.islice(itertools.product(*spokes.values()), WITNESS_TRIES):
        sd = dict(zip(spokes, choice))
        g = wheel_graph(a.d, sd)
        gamma = {}
        for v in g.rot:
            if v == 0:
                continue
            if 1 <= v <= a.d:
                gamma[v] = sd[v]
                continue
            lo, hi = b.get(v, (5, INF))
            gamma[v] = int(hi) if lo == hi else (max(int(lo), cap) if hi == INF else int(lo))
        try:
            w = make_cartwheel(a.d, gamma)
        except PartError:
            continue
        if any(config_in_cartwheel(k, w) is not None for k in screen):
            continue
        return w, cartwheel_transfer10(w, 0, 1, rules)
    return None


def max_edge_transfer(d: int, rules: Sequence[DischargingRule],
                      screen: Sequence[Configuration] = ()) -> EdgeBound:
    """Largest charge from a degree-``d`` source to a neighbouring sink of degree >= 12."""
    if d < 5:
        raise ValueError(f"source degree {d} < 5")
    cap = wildcard_cap(rules, screen)
    base = _scene_part(d)
    placements = []
    for r in rules:
        for rp in rule_as_parts(r, d):
            if not rp.inward and and_parts(base, rp.part) is not None:
                placements.append(rp)
    # identical images of one rule count once
    seen, uniq = set(), []
    for rp in placements:
        key = (id(rp.rule), rp.vertices)
        if key not in seen:
            seen.add(key)
            uniq.append(rp)
    cache: dict[Part, bool] = {}

    def screened(a: Part) -> bool:
        if a not in cache:
            cache[a] = tau_R(a, screen) is not None
        return cache[a]

    best = [-1, base, ()]

    def visit(i: int, a: Part, q10: int, chosen: tuple) -> None:
        if screened(a):
            return
        if q10 > best[0]:
            best[:] = [q10, a, chosen]
        for j in range(i, len(uniq)):
            b = and_parts(a, uniq[j].part)
            if b is not None:
                visit(j + 1, b, q10 + uniq[j].rule.q10, chosen + (j,))

    visit(0, base, 0, ())
    if best[0] < 0:
        return EdgeBound(d, 0, None, None)
    a = best[1]
    found = _witness(a, cap, rules, screen)
    names = [f"{uniq[j].rule.name}{'+' if uniq[j].sign > 0 else '-'}" for j in best[2]]
    if found is None:
        return EdgeBound(d, best[0], Scene(None, a, names), None)
    w, re10 = found
    return EdgeBound(d, best[0], Scene(w, a, names), re10)


@dataclass
class OverchargeReport:
    threshold: Fraction
    bounds: list[EdgeBound]
    cap: int

    @property
    def passed(self) -> bool:
        return all(b.bound <= self.threshold for b in self.bounds)

    def lines(self) -> list[str]:
        out = []
        for b in self.bounds:
            out.append(f"deg {b.degree} bound {b.bound10}/10 witness")
            if b.witness is not None and b.witness.wheel is not None:
                out.extend("  " + x for x in b.witness.dump().splitlines())
                out.append(f"  rules {' '.join(b.witness.placements) or '-'} "
                           f"reevaluated {b.reevaluated10}/10")
        out.append(f"{'PASS' if self.passed else 'FAIL'} threshold {self.threshold}")
        return out


def verify_overcharge_bound(rules: Sequence[DischargingRule], screen: Sequence[Configuration] = (),
                            threshold: Fraction = Fraction(1, 2),
                            degrees: Sequence[int] | None = None) -> OverchargeReport:
    cap = wildcard_cap(rules, screen)
    if degrees is None:
        # source degrees at or above the cap behave alike
        degrees = range(5, max(8, cap) + 1)
    bounds = [max_edge_transfer(d, rules, screen) for d in degrees]
    return OverchargeReport(Fraction(threshold), bounds, cap)
