import random
from fractions import Fraction

import pytest

from fourcolor.cartwheel import cartwheel_transfer10
from fourcolor.formats import parse_rules
from fourcolor.generate import random_triangulation
from fourcolor.overcharge import max_edge_transfer, verify_overcharge_bound, wildcard_cap
from fourcolor.rules import INF, transfer10, triangle_rule


def test_empty_rules_give_zero():
    rep = verify_overcharge_bound([])
    assert all(b.bound10 == 0 for b in rep.bounds)
    assert rep.passed
    assert [b.degree for b in rep.bounds][:4] == [5, 6, 7, 8]


def test_triangle_rule_hand_count():
    # a degree-5 source sends 1/5 through each of the two triangles on the edge
    b = max_edge_transfer(5, [triangle_rule(2, "tri")])
    assert b.bound == Fraction(2, 5)
    assert b.reevaluated10 == b.bound10


def test_synthetic_rules_exceed_half(data_dir):
    rules = parse_rules(data_dir / "violating.rules")
    rep = verify_overcharge_bound(rules)
    assert not rep.passed
    six = next(b for b in rep.bounds if b.degree == 6)
    assert six.bound == Fraction(6, 10)
    assert six.reevaluated10 == 6
    w = six.witness.wheel
    assert w.gamma[1] >= 12
    assert cartwheel_transfer10(w, 0, 1, rules) == 6
    assert all(b.bound10 == 0 for b in rep.bounds if b.degree != 6)


def test_threshold_zero_fails_with_any_transfer():
    assert not verify_overcharge_bound([triangle_rule(1)], threshold=Fraction(0)).passed


def test_screen_never_raises_the_bound(birkhoff):
    rules = [triangle_rule(2)]
    plain = max_edge_transfer(5, rules).bound10
    screened = max_edge_transfer(5, rules, [birkhoff]).bound10
    assert screened <= plain


def test_wildcard_cap():
    assert wildcard_cap([], []) == 9
    assert wildcard_cap([triangle_rule(1, lo=(5, 5, 5), hi=(10, INF, INF))], []) == 11


def test_report_lines(data_dir):
    rep = verify_overcharge_bound(parse_rules(data_dir / "violating.rules"), degrees=[6])
    lines = rep.lines()
    assert lines[0] == "deg 6 bound 6/10 witness"
    assert any(line.strip().startswith("deg 1 ") for line in lines)
    assert lines[-1].startswith("FAIL")


def test_bound_holds_on_generated_triangulations():
    rules = [triangle_rule(2, "tri")]
    bound = max_edge_transfer(5, rules).bound10
    rng = random.Random(11)
    for _ in range(3):
        t = random_triangulation(rng)
        for u, w in t.edges:
            for a, b in ((u, w), (w, u)):
                if t.degree(a) == 5:
                    assert transfer10(t, a, b, rules) <= bound


def test_source_degree_below_five():
    with pytest.raises(ValueError):
        max_edge_transfer(4, [])
