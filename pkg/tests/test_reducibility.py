import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourcolor.configuration import free_completion
from fourcolor.generate import random_planar_with_ring
from fourcolor.graph import wrap_ring
from fourcolor.reducibility import (BudgetExceeded, ColoringSet, RingSpace, canonical_class,
                                    colorings_fitting, enumerate_colorings, extendable_colorings,
                                    fits, fitting_arrangements, five_ring_classes, format_coloring,
                                    is_consistent, is_d_reducible, is_proper, kempe_implications,
                                    kreweras, lifted_colorings, max_consistent_subset,
                                    noncrossing_partitions, parse_coloring, theta_components)


def oracle_fixed_point(cset: ColoringSet) -> ColoringSet:
    """Drop unsupported classes one round at a time, using every fitting arrangement."""
    mask = cset.mask.copy()
    space = cset.space
    while True:
        drop = []
        for i in np.flatnonzero(mask).tolist():
            c = space.rep(i)
            for t in range(3):
                if not any(not (colorings_fitting(p).mask & ~mask).any()
                           for p in fitting_arrangements(c, t)):
                    drop.append(i)
                    break
        if not drop:
            return ColoringSet(space, mask)
        mask[drop] = False


@pytest.mark.parametrize("r,count", [(3, 24), (4, 84), (5, 240), (6, 732), (7, 2184)])
def test_ring_coloring_counts(r, count):
    # proper 4-colorings of an r-cycle: 3^r + 3(-1)^r
    assert count == 3 ** r + 3 * (-1) ** r
    assert len(enumerate_colorings(r)) == count


def test_four_ring_classes():
    names = sorted(format_coloring(c) for c in enumerate_colorings(4).classes())
    assert names == ["rgbg", "rgby", "rgrb", "rgrg"]


def test_canonical_class_and_properness():
    assert canonical_class(parse_coloring("bybg")) == parse_coloring("rgrb")
    assert is_proper(parse_coloring("rgby"))
    assert not is_proper(parse_coloring("rgbr"))


def test_set_algebra():
    full = RingSpace(5).full()
    a = ColoringSet.from_colorings(5, [parse_coloring("rgrgb")])
    assert len(a) == 24
    assert a <= full
    assert (a | a.complement()) == full
    assert not (a & a.complement())
    assert (full - a) == a.complement()
    assert parse_coloring("gbgby") in a


def test_from_colorings_rejects_improper():
    with pytest.raises(ValueError):
        ColoringSet.from_colorings(4, [parse_coloring("rrgb")])


def test_theta_components():
    c = parse_coloring("rgbyrg")
    runs = theta_components(c, [("r", "g"), ("b", "y")])
    assert sorted(len(r.positions) for r in runs) == [2, 4]
    whole = theta_components(parse_coloring("rgrg"), 0)
    assert len(whole) == 1 and len(whole[0].positions) == 4


def test_noncrossing_partition_counts_are_catalan():
    assert [len(noncrossing_partitions(k)) for k in range(1, 7)] == [1, 2, 5, 14, 42, 132]


def test_kreweras_sizes():
    # |pi| + |K(pi)| = k + 1
    for k in range(1, 6):
        for pi in noncrossing_partitions(k):
            assert len(pi) + len(kreweras(k, pi)) == k + 1


@pytest.mark.parametrize("r", [4, 5, 6])
def test_colorings_fitting_matches_direct_filter(r):
    space = RingSpace(r)
    everything = list(enumerate_colorings(r))
    for i in range(len(space)):
        c = space.rep(i)
        for t in range(3):
            for p in fitting_arrangements(c, t):
                fast = colorings_fitting(p)
                direct = ColoringSet.from_colorings(r, [x for x in everything if fits(x, p)])
                assert fast == direct


def test_birkhoff_is_d_reducible(birkhoff):
    v = is_d_reducible(birkhoff)
    assert v.reducible
    assert v.remainder == 0
    assert v.rounds == 5
    assert v.ring == 6 and v.internal == 4


def test_five_wheel_and_edge_are_not_reducible(mixed_configs):
    by_name = {k.name: k for k in mixed_configs}
    w = is_d_reducible(by_name["wheel5"])
    assert (w.reducible, w.remainder, w.extendable) == (False, 120, 120)
    e = is_d_reducible(by_name["edge55"])
    assert (e.reducible, e.remainder) == (False, 384)


def test_remainders_are_consistent_by_oracle(mixed_configs):
    for k in mixed_configs:
        s = free_completion(k)
        rest, _ = max_consistent_subset(extendable_colorings(s).complement())
        assert is_consistent(rest)


def test_extendable_sets_of_wheel_are_three_colorings(mixed_configs):
    wheel = next(k for k in mixed_configs if k.name == "wheel5")
    ext = extendable_colorings(free_completion(wheel))
    assert all(len(set(c)) <= 3 for c in ext.classes())


def test_budget_exceeded(birkhoff):
    with pytest.raises(BudgetExceeded):
        is_d_reducible(birkhoff, max_rounds=2)


def test_ring_cap(birkhoff):
    with pytest.raises(ValueError):
        is_d_reducible(birkhoff, ring_cap=5)


@pytest.mark.parametrize("r", [4, 5, 6])
def test_fast_fixed_point_matches_oracle(r):
    rng = np.random.default_rng(r)
    space = RingSpace(r)
    for _ in range(15):
        cset = ColoringSet(space, rng.random(len(space)) < 0.7)
        fast, _ = max_consistent_subset(cset)
        assert fast == oracle_fixed_point(cset)


def test_lifted_sets_are_consistent():
    rng = random.Random(7)
    for _ in range(20):
        g, _ = random_planar_with_ring(rng, rng.randint(4, 6), rng.randint(0, 3))
        assert is_consistent(lifted_colorings(g, wrap_ring(g, g.outer)))


def test_five_ring_classes_rotate_right():
    a, b = five_ring_classes()
    assert format_coloring(next(a[0].classes())) == "rgrgb"
    assert parse_coloring("brgrg") in a[1]
    assert parse_coloring("rgryb") in b[0]


def ring_has_chord(g, wrap) -> bool:
    ring = [wrap.phi[i] for i in wrap.ring.vertices]
    return any(g.adjacent(ring[i], ring[(i + 2) % 5]) for i in range(5))


def test_kempe_implications_on_ring_bounded_graphs():
    rng = random.Random(3)
    chordless = 0
    for _ in range(150):
        g, _ = random_planar_with_ring(rng, 5, rng.randint(1, 4))
        wrap = wrap_ring(g, g.outer)
        bad = kempe_implications(lifted_colorings(g, wrap))
        # the first implication always holds; the second needs a chordless ring
        assert not [b for b in bad if b.startswith("#1")]
        if not ring_has_chord(g, wrap):
            chordless += 1
            assert bad == []
    assert chordless >= 10


masks5 = st.lists(st.booleans(), min_size=len(RingSpace(5)), max_size=len(RingSpace(5)))
masks6 = st.lists(st.booleans(), min_size=len(RingSpace(6)), max_size=len(RingSpace(6)))


def _cs(r, bits):
    return ColoringSet(RingSpace(r), np.array(bits, dtype=bool))


@settings(max_examples=60, deadline=None)
@given(masks5, masks5)
def test_fixed_point_algebra_ring5(a, b):
    x, y = _cs(5, a), _cs(5, b)
    fx, _ = max_consistent_subset(x)
    assert fx <= x
    assert max_consistent_subset(fx)[0] == fx
    assert max_consistent_subset(x & y)[0] <= fx
    fy, _ = max_consistent_subset(y)
    u = fx | fy
    assert max_consistent_subset(u)[0] == u


@settings(max_examples=30, deadline=None)
@given(masks6)
def test_fixed_point_is_consistent_ring6(a):
    fx, _ = max_consistent_subset(_cs(6, a))
    assert is_consistent(fx)
