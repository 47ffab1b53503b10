"""Cartwheels and parts, numbered around the hub.

Numbering: hub 0, spokes ``1..d`` clockwise, hat ``d + k`` between spokes
``k`` and ``k + 1``, and the ``l``-th fan vertex clockwise over spoke ``k``
is ``k + (l + 1) d``.  A spoke of degree ``δ`` has ``δ - 5`` fan vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .configuration import Configuration
from .embed import find_maps
from .graph import RotationGraph, from_faces, second_neighborhood
from .rules import DischargingRule, transfer10

INF = math.inf


class PartError(ValueError):
    """Bad vertex reference or empty interval in a part operation."""


# -- numbering ------------------------------------------------------------------

def spoke(d: int, k: int) -> int:
    return (k - 1) % d + 1


def hat(d: int, k: int) -> int:
    return d + spoke(d, k)


def fan(d: int, k: int, l: int) -> int:
    return k + (l + 1) * d


def classify(d: int, v: int) -> tuple[str, int, int]:
    """``(kind, spoke, l)`` for a vertex number."""
    if v == 0:
        return ("hub", 0, 0)
    if 1 <= v <= d:
        return ("spoke", v, 0)
    if d < v <= 2 * d:
        return ("hat", v - d, 0)
    k = (v - 1) % d + 1
    l = (v - k) // d - 1
    if l < 1:
        raise PartError(f"{v} is not a vertex number for hub degree {d}")
    return ("fan", k, l)


def wheel_graph(d: int, spoke_degrees: Mapping[int, int | None]) -> RotationGraph:
    """Hub, spokes, hats and the fans of spokes with a known degree.

    Spokes mapped to ``None`` are left open: their two hats are not joined
    and the infinite face reaches the spoke.
    """
    if d < 3:
        raise PartError("hub degree must be at least 3")
    tris = []
    for k in range(1, d + 1):
        tris.append((spoke(d, k), 0, spoke(d, k + 1)))
        tris.append((spoke(d, k), spoke(d, k + 1), hat(d, k)))
        deg = spoke_degrees.get(k)
        if deg is None:
            continue
        if deg < 5:
            raise PartError(f"spoke {k} degree {deg} < 5")
        around = [hat(d, k - 1)] + [fan(d, k, l) for l in range(1, deg - 4)] + [hat(d, k)]
        for x, y in zip(around, around[1:]):
            tris.append((x, k, y))
    g = from_faces(tris)
    outer = max(g.faces, key=lambda f: (len(f), sorted(f)))
    return g.with_outer(outer[0])


# -- cartwheels -----------------------------------------------------------------

@dataclass(eq=False)
class Cartwheel:
    d: int
    graph: RotationGraph
    gamma: dict[int, int]

    hub = 0

    @property
    def spoke_degrees(self) -> dict[int, int]:
        return {k: self.gamma[k] for k in range(1, self.d + 1)}

    def __repr__(self) -> str:
        return f"Cartwheel(d={self.d}, spokes={[self.gamma[k] for k in range(1, self.d + 1)]})"

    def key(self):
        return (self.d, tuple(sorted(self.gamma.items())))

    def __eq__(self, other):
        return isinstance(other, Cartwheel) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def make_cartwheel(d: int, gamma: Mapping[int, int]) -> Cartwheel:
    """Cartwheel from degrees of spokes, hats and fans (numbered as above)."""
    missing = [k for k in range(1, d + 1) if k not in gamma]
    if missing:
        raise PartError(f"no degree for spokes {missing}")
    spokes = {k: gamma[k] for k in range(1, d + 1)}
    g = wheel_graph(d, spokes)
    missing = [v for v in g.rot if v != 0 and v not in gamma]
    if missing:
        raise PartError(f"no degree for vertices {missing}")
    gam = {v: gamma[v] for v in g.rot if v != 0}
    gam[0] = d
    for v, deg in gam.items():
        if deg < 5:
            raise PartError(f"vertex {v} has degree {deg} < 5")
    return Cartwheel(d, g, gam)


class CartwheelError(ValueError):
    pass


def extract_cartwheel(t: RotationGraph, v: int) -> tuple[Cartwheel, dict[int, int]]:
    """The cartwheel with hub ``v`` and the map from its numbers to ``t``."""
    nb = second_neighborhood(t, v)
    if not nb.well_behaved:
        raise CartwheelError(f"second neighbourhood of {v} is not well-behaved")
    spokes = t.rot[v]
    d = len(spokes)
    num = {v: 0}
    for k, s in enumerate(spokes, 1):
        num[s] = k
    for k, s in enumerate(spokes, 1):
        prev_s, next_s = spokes[k - 2], spokes[k % d]
        # clockwise around a spoke: hub, previous spoke, hat, fans..., hat, next spoke
        seq = []
        w = t.succ(s, prev_s)
        while w != next_s:
            seq.append(w)
            w = t.succ(s, w)
        if len(seq) < 2:
            raise CartwheelError(f"spoke {s} has degree below 5")
        hats = (seq[0], seq[-1])
        for h, idx in ((hats[0], k - 1), (hats[1], k)):
            if num.setdefault(h, hat(d, idx)) != hat(d, idx):
                raise CartwheelError(f"vertex {h} is a hat of two spoke pairs")
        for l, f in enumerate(seq[1:-1], 1):
            if f in num:
                raise CartwheelError(f"vertex {f} is a fan of two spokes")
            num[f] = fan(d, k, l)
    if set(num) != set(nb.graph.rot):
        raise CartwheelError("second neighbourhood does not match the cartwheel shape")
    gamma = {num[w]: t.degree(w) for w in num}
    w = make_cartwheel(d, gamma)
    inv = {n: x for x, n in num.items()}
    # the numbered wheel must coincide with the induced second neighbourhood
    sub = t.induced(num)
    for x in num:
        if sorted(num[y] for y in sub.rot[x]) != sorted(w.graph.rot[num[x]]):
            raise CartwheelError(f"adjacency of {x} differs from the cartwheel shape")
    return w, inv


def cartwheel_transfer10(w: Cartwheel, a: int, b: int, rules: Iterable[DischargingRule]) -> int:
    return transfer10(w.graph, a, b, rules, w.gamma)


def cartwheel_charge(w: Cartwheel, rules: Iterable[DischargingRule]) -> Fraction:
    rules = list(rules)
    total = 10 * (6 - w.d)
    for k in range(1, w.d + 1):
        total -= cartwheel_transfer10(w, 0, k, rules)
        total += cartwheel_transfer10(w, k, 0, rules)
    return Fraction(total, 10)


def config_in_cartwheel(k: Configuration, w: Cartwheel) -> dict[int, int] | None:
    ok = lambda p, h: k.gamma[p] == w.gamma[h]
    for m, _ in find_maps(k.graph, w.graph, ok):
        return m
    return None


# -- parts ----------------------------------------------------------------------

Bound = tuple[int, float]


@dataclass(frozen=True, eq=False)
class Part:
    """Degree intervals on the hub neighbourhood; fans exist over fixed spokes."""

    d: int
    bounds: tuple[tuple[int, int, float], ...]

    @classmethod
    def make(cls, d: int, bounds: Mapping[int, Bound]) -> "Part":
        b = dict(bounds)
        b[0] = (d, d)
        for v, (lo, hi) in b.items():
            if lo > hi:
                raise PartError(f"vertex {v}: empty interval [{lo}, {hi}]")
            if lo < 5 and v != 0:
                raise PartError(f"vertex {v}: lower bound {lo} < 5")
        # fans exist exactly over spokes whose degree is fixed
        for k in range(1, d + 1):
            lo, hi = b[k]
            fans = {fan(d, k, l) for l in range(1, int(lo) - 4)} if lo == hi else set()
            for v in list(b):
                if v > 2 * d and classify(d, v)[1] == k and v not in fans:
                    raise PartError(f"fan {v} over spoke {k} which is not fixed at that size")
            for f in fans:
                b.setdefault(f, (5, INF))
        return cls(d, tuple(sorted((v, lo, hi) for v, (lo, hi) in b.items())))

    @property
    def lo(self) -> dict[int, int]:
        return {v: lo for v, lo, _ in self.bounds}

    @property
    def hi(self) -> dict[int, float]:
        return {v: hi for v, _, hi in self.bounds}

    def bound(self, v: int) -> Bound:
        for x, lo, hi in self.bounds:
            if x == v:
                return (lo, hi)
        raise PartError(f"vertex {v} is not in the part")

    def as_dict(self) -> dict[int, Bound]:
        return {v: (lo, hi) for v, lo, hi in self.bounds}

    def vertices(self) -> list[int]:
        return [v for v, _, _ in self.bounds]

    def fixed(self, k: int) -> bool:
        lo, hi = self.bound(k)
        return lo == hi

    def spoke_degrees(self) -> dict[int, int | None]:
        return {k: (int(self.bound(k)[0]) if self.fixed(k) else None) for k in range(1, self.d + 1)}

    def graph(self) -> RotationGraph:
        return _part_graph(self.d, tuple(sorted(self.spoke_degrees().items(), key=lambda x: x[0])))

    def __eq__(self, other):
        return isinstance(other, Part) and self.d == other.d and self.bounds == other.bounds

    def __hash__(self):
        return hash((self.d, self.bounds))

    def describe(self) -> str:
        out = []
        for v, lo, hi in self.bounds:
            if v == 0 or (lo == 5 and hi == INF):
                continue
            out.append(f"{v}:{lo}..{'*' if hi == INF else int(hi)}")
        return " ".join(out) or "trivial"

    def __repr__(self) -> str:
        return f"Part(d={self.d}, {self.describe()})"


_GRAPH_CACHE: dict = {}


def _part_graph(d: int, spokes: tuple) -> RotationGraph:
    key = (d, spokes)
    if key not in _GRAPH_CACHE:
        _GRAPH_CACHE[key] = wheel_graph(d, dict(spokes))
    return _GRAPH_CACHE[key]


def trivial_part(d: int) -> Part:
    b: dict[int, Bound] = {}
    for k in range(1, d + 1):
        b[k] = (5, INF)
        b[hat(d, k)] = (5, INF)
    return Part.make(d, b)


def part_fits_map(w: Cartwheel, p: Part, rotation: int = 0, mirror: bool = False) -> bool:
    for v, lo, hi in p.bounds:
        x = transform_vertex(p, v, rotation, mirror)
        if x not in w.gamma or not (lo <= w.gamma[x] <= hi):
            return False
    return True


def part_fits(w: Cartwheel, p: Part) -> bool:
    """Some rotation or reflection of the part numbering places it in ``w``."""
    if w.d != p.d:
        return False
    return any(part_fits_map(w, p, r, m) for r in range(p.d) for m in (False, True))


def refine(p: Part, m: int, n: int) -> tuple[Part, Part]:
    """The ordered refinement ``P'`` and its complement ``P''``."""
    if m == 0 or m not in p.as_dict():
        raise PartError(f"vertex {m} is not in the part")
    if n == 0:
        raise PartError("bound 0 is meaningless")
    lo, hi = p.bound(m)
    b1, b2 = p.as_dict(), p.as_dict()
    if n > 0:
        if not (lo < n <= hi):
            raise PartError(f"cannot raise the lower bound of {m} from {lo} to {n} (upper {hi})")
        b1[m] = (n, hi)
        b2[m] = (lo, n - 1)
    else:
        if not (lo <= -n < hi):
            raise PartError(f"cannot lower the upper bound of {m} from {hi} to {-n} (lower {lo})")
        b1[m] = (lo, -n)
        b2[m] = (-n + 1, hi)
    return Part.make(p.d, b1), Part.make(p.d, b2)


def and_parts(p: Part, q: Part) -> Part | None:
    if p.d != q.d:
        raise PartError("parts of different hub degrees")
    a, b = p.as_dict(), q.as_dict()
    out: dict[int, Bound] = {}
    for v in set(a) | set(b):
        lo1, hi1 = a.get(v, (5, INF))
        lo2, hi2 = b.get(v, (5, INF))
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return None
        out[v] = (lo, hi)
    # drop fans whose spoke ended up without a fixed degree of matching size
    d = p.d
    for v in [v for v in out if v > 2 * d]:
        _, k, l = classify(d, v)
        lo, hi = out[k]
        if lo != hi or l > lo - 5:
            if out[v] != (5, INF):
                return None
            del out[v]
    try:
        return Part.make(d, out)
    except PartError:
        return None


def transform_vertex(p: Part | int, v: int, rotation: int, mirror: bool) -> int:
    d = p if isinstance(p, int) else p.d
    kind, k, l = classify(d, v)
    if kind == "hub":
        return 0
    sgn = -1 if mirror else 1
    k2 = (sgn * (k - 1) + rotation) % d + 1
    if kind == "spoke":
        return k2
    if kind == "hat":
        return hat(d, k2 - 1) if mirror else hat(d, k2)
    if mirror:
        deg = int(p.bound(k)[0]) if isinstance(p, Part) else None
        if deg is None:
            raise PartError("mirroring a fan needs the part")
        l = deg - 4 - l
    return fan(d, k2, l)


def transform(p: Part, rotation: int = 0, mirror: bool = False) -> Part:
    """Relabel by rotating spoke 1 to spoke ``1 + rotation``, reflecting first if asked."""
    return Part.make(p.d, {transform_vertex(p, v, rotation, mirror): (lo, hi)
                           for v, lo, hi in p.bounds})


def enumerate_cartwheels(d: int, degrees: Sequence[int]) -> Iterable[Cartwheel]:
    """Every cartwheel with hub ``d`` whose other degrees lie in ``degrees``."""
    from itertools import product
    for spokes in product(degrees, repeat=d):
        g = wheel_graph(d, dict(enumerate(spokes, 1)))
        rim = sorted(v for v in g.rot if v > d)
        for rim_deg in product(degrees, repeat=len(rim)):
            gamma = {0: d, **dict(enumerate(spokes, 1)), **dict(zip(rim, rim_deg))}
            yield Cartwheel(d, g, gamma)
