"""Ring colorings, Kempe-chain consistency and the D-reducibility test.

Colorings use the integers 0..3 for ``r g b y``.  A coloring class is stored
by its first-occurrence normal form (colours numbered in order of first
appearance), which is also the lexicographically least member of its orbit
under the 24 colour permutations.  Colouring sets are boolean masks over the
classes of one ring length, so they are permutation-closed by construction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .configuration import Configuration, FreeCompletion, free_completion
from .graph import FaceWrap, RotationGraph

COLORS = "rgby"
# the three ways of splitting the colours into two pairs
THETAS: tuple[tuple[frozenset[int], frozenset[int]], ...] = (
    (frozenset({0, 1}), frozenset({2, 3})),
    (frozenset({0, 2}), frozenset({1, 3})),
    (frozenset({0, 3}), frozenset({1, 2})),
)
_SWAP = tuple(
    tuple(next(iter(pair - {c})) for c in range(4) for pair in theta if c in pair)
    for theta in THETAS
)
DEFAULT_RING_CAP = 16

Coloring = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    """The fixed point ran past its iteration or time budget."""


def parse_coloring(text: str) -> Coloring:
    return tuple(COLORS.index(ch) for ch in text)


def format_coloring(c: Sequence[int]) -> str:
    return "".join(COLORS[x] for x in c)


def is_proper(c: Sequence[int]) -> bool:
    return len(c) >= 2 and all(c[i] != c[i - 1] for i in range(len(c)))


def canonical_class(c: Sequence[int]) -> Coloring:
    """First-occurrence normal form: the least member of the orbit."""
    relabel: dict[int, int] = {}
    out = []
    for x in c:
        if x not in relabel:
            relabel[x] = len(relabel)
        out.append(relabel[x])
    return tuple(out)


def class_size(c: Sequence[int]) -> int:
    k = len(set(c))
    return {1: 4, 2: 12, 3: 24, 4: 24}[k]


def theta_index(theta) -> int:
    """Accept an index or a pair of colour pairs (ints or letters)."""
    if isinstance(theta, int):
        return theta
    pairs = []
    for pair in theta:
        pairs.append(frozenset(COLORS.index(x) if isinstance(x, str) else x for x in pair))
    for i, t in enumerate(THETAS):
        if set(t) == set(pairs):
            return i
    raise ValueError(f"not a colour partition: {theta!r}")


# -- the space of classes of one ring length ---------------------------------

class RingSpace:
    """All coloring classes of an ``r``-circuit, in lexicographic order."""

    _cache: dict[int, "RingSpace"] = {}

    def __new__(cls, r: int):
        if r < 2:
            raise ValueError("ring length must be at least 2")
        if r not in cls._cache:
            obj = super().__new__(cls)
            obj._build(r)
            cls._cache[r] = obj
        return cls._cache[r]

    def _build(self, r: int) -> None:
        self.r = r
        # grow first-occurrence sequences position by position
        seqs = np.zeros((1, 1), dtype=np.int8)
        top = np.zeros(1, dtype=np.int8)
        for _ in range(1, r):
            parts = []
            tops = []
            for x in range(4):
                keep = (seqs[:, -1] != x) & (top + 1 >= x)
                if keep.any():
                    s = seqs[keep]
                    parts.append(np.hstack([s, np.full((len(s), 1), x, dtype=np.int8)]))
                    tops.append(np.maximum(top[keep], x))
            seqs = np.vstack(parts)
            top = np.concatenate(tops).astype(np.int8)
        seqs = seqs[seqs[:, -1] != seqs[:, 0]]
        weights = 4 ** np.arange(r - 1, -1, -1, dtype=np.int64)
        codes = seqs.astype(np.int64) @ weights
        order = np.argsort(codes)
        self.classes = seqs[order]
        self.codes = codes[order]
        ncol = np.array([len(set(row)) for row in self.classes.tolist()])
        self.sizes = np.where(ncol == 2, 12, 24).astype(np.int64)
        self._index = {int(c): i for i, c in enumerate(self.codes.tolist())}
        self._weights = [4 ** (r - 1 - i) for i in range(r)]

    def __len__(self) -> int:
        return len(self.codes)

    def __repr__(self) -> str:
        return f"RingSpace(r={self.r}, classes={len(self)})"

    def code(self, c: Sequence[int]) -> int:
        return sum(x * w for x, w in zip(canonical_class(c), self._weights))

    def index(self, c: Sequence[int]) -> int:
        return self._index[self.code(c)]

    def rep(self, i: int) -> Coloring:
        return tuple(int(x) for x in self.classes[i])

    def full(self) -> "ColoringSet":
        return ColoringSet(self, np.ones(len(self), dtype=bool))

    def empty(self) -> "ColoringSet":
        return ColoringSet(self, np.zeros(len(self), dtype=bool))


@dataclass(frozen=True, eq=False)
class ColoringSet:
    """A permutation-closed set of proper colorings of one ring."""

    space: RingSpace
    mask: np.ndarray

    @classmethod
    def from_colorings(cls, r: int, colorings: Iterable[Sequence[int]]) -> "ColoringSet":
        space = RingSpace(r)
        mask = np.zeros(len(space), dtype=bool)
        for c in colorings:
            if len(c) != r or not is_proper(c):
                raise ValueError(f"not a proper coloring of the {r}-ring: {c!r}")
            mask[space.index(c)] = True
        return cls(space, mask)

    @property
    def ring(self) -> int:
        return self.space.r

    def __len__(self) -> int:
        """Number of colorings, not of classes."""
        return int(self.space.sizes[self.mask].sum())

    @property
    def num_classes(self) -> int:
        return int(self.mask.sum())

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __contains__(self, c: Sequence[int]) -> bool:
        if len(c) != self.ring or not is_proper(c):
            return False
        return bool(self.mask[self.space.index(c)])

    def indices(self) -> list[int]:
        return np.flatnonzero(self.mask).tolist()

    def classes(self) -> Iterator[Coloring]:
        for i in self.indices():
            yield self.space.rep(i)

    def __iter__(self) -> Iterator[Coloring]:
        """Every coloring in the set, expanded over colour permutations."""
        from itertools import permutations
        for rep in self.classes():
            seen = set()
            for perm in permutations(range(4)):
                c = tuple(perm[x] for x in rep)
                if c not in seen:
                    seen.add(c)
                    yield c

    def _check(self, other: "ColoringSet") -> None:
        if other.space is not self.space:
            raise ValueError("coloring sets of different ring lengths")

    def __or__(self, other):
        self._check(other)
        return ColoringSet(self.space, self.mask | other.mask)

    def __and__(self, other):
        self._check(other)
        return ColoringSet(self.space, self.mask & other.mask)

    def __sub__(self, other):
        self._check(other)
        return ColoringSet(self.space, self.mask & ~other.mask)

    def complement(self) -> "ColoringSet":
        return ColoringSet(self.space, ~self.mask)

    def __le__(self, other) -> bool:
        self._check(other)
        return not (self.mask & ~other.mask).any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoringSet):
            return NotImplemented
        return self.space is other.space and bool((self.mask == other.mask).all())

    def __hash__(self):
        return hash((self.ring, self.mask.tobytes()))

    def __repr__(self) -> str:
        return f"ColoringSet(ring={self.ring}, classes={self.num_classes}, colorings={len(self)})"


def enumerate_colorings(r: int) -> ColoringSet:
    return RingSpace(r).full()


# -- extension to a free completion -------------------------------------------

def _extends(graph: RotationGraph, order: list[int], fixed: dict[int, int]) -> bool:
    col = dict(fixed)

    def go(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        banned = {col[w] for w in graph.rot[v] if w in col}
        for x in range(4):
            if x not in banned:
                col[v] = x
                if go(i + 1):
                    return True
        col.pop(v, None)
        return False

    return go(0)


def _core_order(graph: RotationGraph, placed: Iterable[int], core: Iterable[int]) -> list[int]:
    # most constrained first: repeatedly take the core vertex with most placed neighbours
    placed = set(placed)
    rest = set(core)
    order = []
    while rest:
        v = max(sorted(rest), key=lambda x: sum(1 for w in graph.rot[x] if w in placed))
        order.append(v)
        placed.add(v)
        rest.discard(v)
    return order


def extendable_colorings(s: FreeCompletion) -> ColoringSet:
    """Ring colorings that extend to a proper 4-coloring of the completion."""
    space = RingSpace(s.ring_size)
    ring = list(s.ring.vertices)
    order = _core_order(s.graph, ring, s.core)
    mask = np.zeros(len(space), dtype=bool)
    for i in range(len(space)):
        rep = space.rep(i)
        mask[i] = _extends(s.graph, order, dict(zip(ring, rep)))
    return ColoringSet(space, mask)


def lifted_colorings(graph: RotationGraph, wrap: FaceWrap) -> ColoringSet:
    """Ring colorings induced by the proper 4-colorings of ``graph``."""
    ring = wrap.ring.vertices
    space = RingSpace(len(ring))
    mask = np.zeros(len(space), dtype=bool)
    verts = graph.vertices
    col: dict[int, int] = {}

    def go(i: int, top: int) -> None:
        if i == len(verts):
            lift = wrap.lift(col)
            if is_proper(lift):
                mask[space.index(lift)] = True
            return
        v = verts[i]
        banned = {col[w] for w in graph.rot[v] if w in col}
        # colours beyond top + 1 are symmetric to top + 1
        for x in range(min(top + 2, 4)):
            if x not in banned:
                col[v] = x
                go(i + 1, max(top, x))
                del col[v]

    go(0, -1)
    return ColoringSet(space, mask)


# -- theta runs and arrangements ---------------------------------------------

@dataclass(frozen=True)
class Run:
    positions: tuple[int, ...]
    pair: frozenset[int]
    first: int


def theta_components(c: Sequence[int], theta) -> list[Run]:
    """Maximal cyclic runs coloured within one pair, in ring order.

    A ring coloured from a single pair gives one run covering the ring.
    """
    t = THETAS[theta_index(theta)]
    r = len(c)
    side = [0 if c[i] in t[0] else 1 for i in range(r)]
    if len(set(side)) == 1:
        return [Run(tuple(range(r)), t[side[0]], c[0])]
    start = next(i for i in range(r) if side[i] != side[i - 1])
    runs = []
    cur = [start]
    for k in range(1, r):
        i = (start + k) % r
        if side[i] == side[cur[-1]]:
            cur.append(i)
        else:
            runs.append(cur)
            cur = [i]
    runs.append(cur)
    return [Run(tuple(p), t[side[p[0]]], c[p[0]]) for p in runs]


@dataclass(frozen=True)
class SignedPathArrangement:
    """Groups of ring positions with a sign per run of each group."""

    ring: int
    groups: tuple[tuple[tuple[int, ...], ...], ...]
    signs: tuple[tuple[int, ...], ...]

    def runs(self) -> list[tuple[int, ...]]:
        return [run for g in self.groups for run in g]


@lru_cache(maxsize=None)
def noncrossing_partitions(k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Noncrossing set partitions of ``0..k-1`` (Catalan many)."""
    if k == 0:
        return ((),)
    out = []
    # the block containing 0 is {0} + S; gaps between its members recurse
    for mask in range(1 << (k - 1)):
        block = [0] + [i + 1 for i in range(k - 1) if mask >> i & 1]
        gaps = []
        for a, b in zip(block, block[1:] + [k]):
            gaps.append(list(range(a + 1, b)))
        subs = [noncrossing_partitions(len(g)) for g in gaps]
        for combo in product(*subs):
            blocks = [tuple(block)]
            for g, part in zip(gaps, combo):
                blocks += [tuple(g[i] for i in b) for b in part]
            out.append(tuple(sorted(blocks)))
    return tuple(out)


def kreweras(k: int, pi: Sequence[Sequence[int]]) -> list[list[int]]:
    """Coarsest noncrossing grouping of the odd runs compatible with ``pi``.

    Odd run ``j`` sits between even runs ``j`` and ``j + 1``; two odd runs
    may share a group exactly when no block of ``pi`` separates them.
    """
    sig: dict[tuple[int, ...], list[int]] = {}
    for j in range(k):
        key = []
        for block in pi:
            after = [b for b in block if b > j]
            key.append(after[0] if after else block[0])
        sig.setdefault(tuple(key), []).append(j)
    return list(sig.values())


def _maximal_groupings(runs: list[Run]) -> Iterator[list[list[int]]]:
    """Coarsest noncrossing same-pair groupings, as lists of run indices."""
    n = len(runs)
    if n == 1:
        yield [[0]]
        return
    k = n // 2
    for pi in noncrossing_partitions(k):
        groups = [[2 * b for b in block] for block in pi]
        groups += [[2 * j + 1 for j in block] for block in kreweras(k, pi)]
        yield groups


def _is_noncrossing(groups: Sequence[Sequence[int]], n: int) -> bool:
    """Each group lies in one component of the cycle minus any other group."""
    for i, gi in enumerate(groups):
        for j, gj in enumerate(groups):
            if i == j:
                continue
            bset = sorted(gj)
            # gaps of gj on the cycle of n items
            def gap(x):
                after = [b for b in bset if b > x]
                return after[0] if after else bset[0]
            if len({gap(x) for x in gi}) > 1:
                return False
    return True


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _arrangement(c: Sequence[int], runs: list[Run], groups) -> SignedPathArrangement:
    out_groups = []
    out_signs = []
    for g in groups:
        g = sorted(g, key=lambda i: runs[i].positions[0])
        lead = runs[g[0]].first
        out_groups.append(tuple(runs[i].positions for i in g))
        out_signs.append(tuple(0 if runs[i].first == lead else 1 for i in g))
    order = sorted(range(len(out_groups)), key=lambda i: out_groups[i])
    return SignedPathArrangement(len(c), tuple(out_groups[i] for i in order),
                                 tuple(out_signs[i] for i in order))


def fitting_arrangements(c: Sequence[int], theta, maximal_only: bool = False
                         ) -> list[SignedPathArrangement]:
    """Arrangements ``c`` theta-fits: noncrossing groupings of same-pair runs.

    Signs are those forced by the first colours of the runs.  With
    ``maximal_only`` only the coarsest groupings are returned; every other
    arrangement fits a superset of the colorings of one of these.
    """
    runs = theta_components(c, theta)
    if maximal_only:
        groupings = list(_maximal_groupings(runs))
    else:
        groupings = []
        for part in _set_partitions(list(range(len(runs)))):
            if any(len({runs[i].pair for i in g}) > 1 for g in part):
                continue
            if _is_noncrossing(part, len(runs)):
                groupings.append(part)
    out = {}
    for g in groupings:
        p = _arrangement(c, runs, g)
        out.setdefault((p.groups, p.signs), p)
    return list(out.values())


def _swap_positions(c: list[int], positions: Iterable[int], swap: Sequence[int]) -> None:
    for i in positions:
        c[i] = swap[c[i]]


def _some_fitting_coloring(p: SignedPathArrangement) -> tuple[Coloring, int] | None:
    """Build one coloring that fits ``p``: alternate within runs, signs choose colours."""
    runs = p.runs()
    if len(runs) == 1 and len(runs[0]) == p.ring:
        if p.ring % 2:
            return None
        return tuple(i % 2 for i in range(p.ring)), 0
    for t, theta in enumerate(THETAS):
        # runs alternate between the two pairs around the ring
        ordered = sorted(runs, key=lambda run: run[0])
        side = {}
        for i, run in enumerate(ordered):
            side[run] = i % 2
        if len(ordered) % 2:
            return None
        c = [0] * p.ring
        for group, signs in zip(p.groups, p.signs):
            for run, s in zip(group, signs):
                a, b = sorted(theta[side[run]])
                col = (a, b) if s == 0 else (b, a)
                for k, pos in enumerate(run):
                    c[pos] = col[k % 2]
        if is_proper(c) and all(len({side[run] for run in g}) == 1 for g in p.groups):
            return tuple(c), t
        return None
    return None


def colorings_fitting(p: SignedPathArrangement) -> ColoringSet:
    """Colorings fitting ``p``: independent pair swaps on each group of a fitting coloring."""
    space = RingSpace(p.ring)
    mask = np.zeros(len(space), dtype=bool)
    base = _some_fitting_coloring(p)
    if base is None:
        return ColoringSet(space, mask)
    c0, t = base
    swap = _SWAP[t]
    groups = [[pos for run in g for pos in run] for g in p.groups]
    for flips in product((0, 1), repeat=len(groups)):
        c = list(c0)
        for g, f in zip(groups, flips):
            if f:
                _swap_positions(c, g, swap)
        mask[space.index(c)] = True
    return ColoringSet(space, mask)


def theta_fits(c: Sequence[int], p: SignedPathArrangement, theta) -> bool:
    """Direct check of the fitting relation for one colour partition."""
    runs = theta_components(c, theta)
    if sorted(run.positions for run in runs) != sorted(p.runs()):
        # runs may start at a different position when they wrap; compare as sets
        if sorted(frozenset(run.positions) for run in runs) != sorted(frozenset(x) for x in p.runs()):
            return False
    first = {frozenset(run.positions): run.first for run in runs}
    for group, signs in zip(p.groups, p.signs):
        for i in range(len(group)):
            for j in range(len(group)):
                same_sign = signs[i] == signs[j]
                same_first = first[frozenset(group[i])] == first[frozenset(group[j])]
                if same_sign != same_first:
                    return False
    return True


def fits(c: Sequence[int], p: SignedPathArrangement) -> bool:
    return any(theta_fits(c, p, t) for t in range(3))


# -- consistency ---------------------------------------------------------------

def is_consistent(cset: ColoringSet) -> bool:
    """Direct-definition check, enumerating every fitting arrangement."""
    cache: dict = {}
    for c in cset.classes():
        for t in range(3):
            ok = False
            for p in fitting_arrangements(c, t):
                key = (p.groups, p.signs)
                if key not in cache:
                    cache[key] = colorings_fitting(p).mask
                if not (cache[key] & ~cset.mask).any():
                    ok = True
                    break
            if not ok:
                return False
    return True


class _Kempe:
    """Per-class data for the fast fixed point on one ring length."""

    def __init__(self, space: RingSpace):
        self.space = space
        self.witness: dict[tuple[int, int], tuple[int, ...]] = {}

    def flips(self, i: int, t: int, groups: list[list[int]], runs: list[Run]) -> list[int]:
        c0 = list(self.space.rep(i))
        swap = _SWAP[t]
        pos = [[p for g in grp for p in runs[g].positions] for grp in groups]
        out = []
        # the first group stays put: flipping everything is a colour permutation
        for flips in product((0, 1), repeat=len(pos) - 1):
            c = list(c0)
            for g, f in zip(pos[1:], flips):
                if f:
                    _swap_positions(c, g, swap)
            out.append(self.space._index[self.space.code(c)])
        return out

    def supported(self, i: int, t: int, mask: np.ndarray) -> bool:
        c = self.space.rep(i)
        runs = theta_components(c, t)
        if len(runs) == 1:
            return True
        key = (i, t)
        cached = self.witness.get(key)
        if cached is not None and all(mask[j] for j in cached):
            return True
        for groups in _maximal_groupings(runs):
            idx = self.flips(i, t, groups, runs)
            if all(mask[j] for j in idx):
                self.witness[key] = tuple(idx)
                return True
        return False


def max_consistent_subset(cset: ColoringSet, max_rounds: int | None = None,
                          max_seconds: float | None = None) -> tuple[ColoringSet, int]:
    """Largest consistent subset and the number of refinement rounds."""
    space = cset.space
    mask = cset.mask.copy()
    kempe = _Kempe(space)
    rounds = 0
    start = time.monotonic()
    while mask.any():
        rounds += 1
        if max_rounds is not None and rounds > max_rounds:
            raise BudgetExceeded(f"more than {max_rounds} rounds")
        drop = []
        for i in np.flatnonzero(mask).tolist():
            if max_seconds is not None and time.monotonic() - start > max_seconds:
                raise BudgetExceeded(f"more than {max_seconds} s")
            if not all(kempe.supported(i, t, mask) for t in range(3)):
                drop.append(i)
        if not drop:
            break
        mask[drop] = False
    return ColoringSet(space, mask), rounds


@dataclass
class Verdict:
    name: str
    ring: int
    internal: int
    reducible: bool
    remainder: int
    rounds: int
    millis: int
    extendable: int = 0
    notes: list[str] = field(default_factory=list)


def is_d_reducible(k: Configuration, ring_cap: int = DEFAULT_RING_CAP,
                   max_rounds: int | None = None, max_seconds: float | None = None) -> Verdict:
    start = time.monotonic()
    s = free_completion(k)
    if s.ring_size > ring_cap:
        raise ValueError(f"{k.name}: ring size {s.ring_size} exceeds the cap of {ring_cap}")
    extendable = extendable_colorings(s)
    rest = extendable.complement()
    if not rest:
        rounds = 0
        remainder = rest
    else:
        remainder, rounds = max_consistent_subset(rest, max_rounds, max_seconds)
    millis = int((time.monotonic() - start) * 1000)
    return Verdict(k.name, s.ring_size, len(s.core), not remainder, len(remainder),
                   rounds, millis, len(extendable))


# -- classes used in the 5-ring Kempe implications ------------------------------

def five_ring_classes() -> tuple[list[ColoringSet], list[ColoringSet]]:
    """``A[i]`` and ``B[i]`` (0-based) for the shifts of rgrgb and rgryb.

    ``A[i + 1]`` is ``A[i]`` rotated one step to the right.
    """
    def shifts(word: str) -> list[ColoringSet]:
        c = parse_coloring(word)
        out = []
        for k in range(5):
            rot = c[-k:] + c[:-k] if k else c
            out.append(ColoringSet.from_colorings(5, [rot]))
        return out
    return shifts("rgrgb"), shifts("rgryb")


def kempe_implications(d: ColoringSet) -> list[str]:
    """Failures of the two implications for an extendable set of a 5-ring."""
    a, b = five_ring_classes()
    meets = lambda x: bool((d & x))
    bad = []
    for i in range(5):
        j = (i + 1) % 5
        if meets(a[i]) and not meets(a[j]) and not meets(b[i]):
            bad.append(f"#1 fails at i={i + 1}")
        if not meets(a[j]) and not meets(b[j]) and not meets(a[i]):
            bad.append(f"#2 fails at i={i + 1}")
    return bad
