import pytest

from fourcolor.cartwheel import (INF, Part, cartwheel_charge, cartwheel_transfer10,
                                 config_in_cartwheel, enumerate_cartwheels, refine,
                                 trivial_part)
from fourcolor.configuration import Configuration
from fourcolor.dispatch import (Line, PresentationScript, ScriptError, Triplet, Unencodable,
                                check_depths, check_hubcap, rule_as_parts, run_presentation,
                                tau_H, tau_R, tau_S, well_positioned_appearance, zeta_bound)
from fourcolor.formats import parse_presentation
from fourcolor.graph import RotationGraph, from_faces
from fourcolor.rules import make_rule, triangle_rule


def fan_rule(source_bounds=(5, INF)):
    # sink t, source s, then x, y, z wound around s; z sits on a fan when t is the hub
    faces = [("t", "s", "x"), ("x", "s", "y"), ("y", "s", "z")]
    ids = {"t": 2, "s": 1, "x": 3, "y": 4, "z": 5}
    g = from_faces([tuple(ids[a] for a in f) for f in faces])
    bounds = {v: (5, INF) for v in g.vertices}
    bounds[1] = source_bounds
    return make_rule("fan", 1, g.rot, 1, 2, bounds)


def test_toy_rule_parts(toy_rules):
    rule = toy_rules[0]
    parts = rule_as_parts(rule, 5)
    assert [(p.inward, p.sign) for p in parts] == [(False, 1), (False, -1)]
    assert all(p.part.bound(1) == (6, INF) for p in parts)
    inward = rule_as_parts(rule, 6)
    assert [p.inward for p in inward] == [True, True]
    assert all(p.part.fixed(1) for p in inward)


def test_rule_needing_fans_of_an_open_spoke_is_unencodable():
    with pytest.raises(Unencodable):
        rule_as_parts(fan_rule(), 5)


def test_rule_with_exact_source_is_encodable():
    parts = rule_as_parts(fan_rule((6, 6)), 5)
    inward = [p for p in parts if p.inward]
    assert len(inward) == 2
    assert all(p.part.bound(1) == (6, 6) for p in inward)
    assert all(max(p.vertices) > 10 for p in inward), "the image reaches a fan"


def test_tau_R_finds_birkhoff(birkhoff):
    p = trivial_part(5)
    for k in (1, 2, 3):
        _, p = refine(p, k, 6)
    assert tau_R(p, [birkhoff]) == "birkhoff"
    assert tau_R(trivial_part(5), [birkhoff]) is None


def test_well_positioned_needs_the_spoke_between_hats():
    pair = Configuration(RotationGraph({1: [2], 2: [1]}).with_outer((1, 2)), {1: 6, 2: 6}, "pair")
    b = trivial_part(5).as_dict()
    b[1] = (5, 5)
    b[6] = b[10] = (6, 6)
    p = Part.make(5, b)
    assert p.graph().adjacent(6, 10)
    assert well_positioned_appearance(pair, p) is None
    b[1] = (6, 6)
    b.pop(11, None)
    assert tau_R(Part.make(5, b), [pair]) == "pair"


def test_zeta_of_triangle_rule_matches_enumeration():
    rule = triangle_rule(1)
    z = zeta_bound(trivial_part(5), 1, 2, [rule], [])
    assert z.value10 == 0
    worst = max(sum(cartwheel_transfer10(w, k, 0, [rule]) - cartwheel_transfer10(w, 0, k, [rule])
                    for k in (1, 2))
                for w in enumerate_cartwheels(5, [5, 6]) if w.gamma[3] == 5 and w.gamma[4] == 5)
    assert worst == 0


def test_zeta_is_minus_infinity_when_everything_reduces(birkhoff):
    p = trivial_part(5)
    for k in (1, 2, 3):
        _, p = refine(p, k, 6)
    assert zeta_bound(p, 1, 2, [triangle_rule(1)], [birkhoff]).value10 == float("-inf")


def test_hubcap_shape():
    check_hubcap(5, [Triplet(1, 2, 0), Triplet(2, 3, 0), Triplet(3, 4, 0), Triplet(4, 5, 0),
                     Triplet(5, 1, 0)])
    # a spoke paired with itself still needs two triplets
    check_hubcap(5, [Triplet(1, 1, 0), Triplet(1, 1, 0), Triplet(2, 3, 0), Triplet(3, 4, 0),
                     Triplet(4, 5, 0), Triplet(5, 2, 0)])
    with pytest.raises(ScriptError):
        check_hubcap(5, [Triplet(1, 1, 0), Triplet(2, 3, 0), Triplet(3, 4, 0), Triplet(4, 5, 0),
                         Triplet(5, 2, 0)])
    with pytest.raises(ScriptError):
        check_hubcap(5, [Triplet(1, 2, 0), Triplet(2, 3, 0)])
    with pytest.raises(ScriptError):
        check_hubcap(5, [Triplet(1, 9, 0)] * 2)


def test_tau_H_arithmetic(toy_rules):
    caps = [Triplet(1, 2, 0), Triplet(2, 3, 0), Triplet(3, 4, 0), Triplet(4, 5, 0), Triplet(5, 1, 0)]
    # with no rules every zeta is 0 but 6 - 5 > 0 keeps the part positive
    res = tau_H(trivial_part(5), caps, [], [])
    assert [z.value10 for z in res.zetas] == [0] * 5
    assert res.arithmetic10 == 10 and not res.passed
    res = tau_H(trivial_part(7), [Triplet(k, k % 7 + 1, 0) for k in range(1, 8)], [], [])
    assert res.passed


def test_tau_S():
    p, _ = refine(trivial_part(5), 1, 6)
    q, _ = refine(trivial_part(5), 3, 6)
    assert tau_S(q, 0, 3, False, [p])
    assert tau_S(q, 0, 2, True, [p])
    assert not tau_S(q, 0, 0, False, [p])
    with pytest.raises(ScriptError):
        tau_S(q, 1, 0, False, [p])


def test_toy_presentation_passes(data_dir, birkhoff, toy_rules):
    script = parse_presentation(data_dir / "present" / "present5.txt")
    rep = run_presentation(5, script, [birkhoff], toy_rules, verbose=True)
    assert rep.success, rep.reason
    assert len(rep.trace) == len(script.lines)
    assert "birkhoff" in rep.trace[3]


def test_toy_presentation_fails_without_birkhoff(data_dir, toy_rules):
    script = parse_presentation(data_dir / "present" / "present5.txt")
    rep = run_presentation(5, script, [], toy_rules)
    assert not rep.success
    assert rep.failed_line == 6  # the R line


def test_depth_check():
    ok = [Line(1, 1, "C", (1, 6)), Line(2, 2, "R", ()), Line(3, 1, "R", ())]
    check_depths(5, ok)
    with pytest.raises(ScriptError):
        check_depths(5, [Line(1, 2, "R", ())])
    with pytest.raises(ScriptError):
        check_depths(5, ok[:2])


def test_toy_rules_sound_on_all_small_cartwheels(birkhoff, toy_rules):
    # every cartwheel with degrees 5 and 6 either contains Birkhoff or has charge <= 0
    bad = [w for w in enumerate_cartwheels(5, [5, 6])
           if config_in_cartwheel(birkhoff, w) is None and cartwheel_charge(w, toy_rules) > 0]
    assert bad == []


def test_presentation_degree_range():
    with pytest.raises(ScriptError):
        run_presentation(12, PresentationScript(12, []), [], [])


def test_wide_configuration_is_rejected_unless_allowed():
    rot = {1: [2], 7: [6]} | {v: [v - 1, v + 1] for v in range(2, 7)}
    wide = Configuration(RotationGraph(rot).with_outer((1, 2)), {v: 5 for v in range(1, 8)}, "path")
    from fourcolor.dispatch import RadiusError
    with pytest.raises(RadiusError):
        tau_R(trivial_part(5), [wide])
    assert tau_R(trivial_part(5), [wide], strict_radius=False) is None


def test_hubcap_arithmetic_rounds_down_to_tenths():
    # d = 8 with q summing to 3.8: 6 - 8 + 1.9 = -0.1
    qs = [5, 5, 5, 5, 5, 5, 4, 4]
    caps = [Triplet(k, k % 8 + 1, q) for k, q in zip(range(1, 9), qs)]
    res = tau_H(trivial_part(8), caps, [], [])
    assert res.arithmetic10 == -1 and res.passed
    from fourcolor.dispatch import floor10_half
    assert floor10_half(-3) == -2
