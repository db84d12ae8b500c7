import json

import jsonschema
import pytest
from gmpy2 import mpq

from unitwitness import tower as tw
from unitwitness import witness as W
from unitwitness.schemas import load_schema
from unitwitness.tower import QQ, adjoin_sqrt, sign
from unitwitness.witness import BASE_TOWER, SQRT2, SQRT3

from conftest import built

ZERO = BASE_TOWER.zero()
ONE = BASE_TOWER.one()
HALF = mpq(1, 2)


def coords(s):
    return {(x.key(), y.key()) for x, y in s.points.values()}


def has_point(s, x, y):
    return (x.key(), y.key()) in coords(s)


def check_sound(s):
    assert W.soundness_failures(s) == []
    assert W.audit_provenance(s) == []
    assert W.unit_graph_connected(s)
    assert W.duplicate_points(s) == []


# -- values ---------------------------------------------------------------

def test_values():
    assert W.value(W.from_kl(0, 0)) == 1
    assert W.value(W.from_kl(0, 1)) == SQRT3
    assert W.value(W.pythag(W.sqrt3(), W.ONE)) == SQRT2
    assert W.value(W.from_kl(2, 1)) == SQRT3 * mpq(8, 9)
    assert W.value(W.triple()) == 3 and W.value(W.double()) == 2


def test_pythag_needs_longer_first_leg():
    with pytest.raises(W.WitnessError):
        W.value(W.pythag(W.ONE, W.sqrt3()))
    with pytest.raises(W.WitnessError):
        W.value(W.pythag(W.ONE, W.ONE))


def test_word_depth_and_json():
    w = W.from_kl(2, 1)
    assert w.depth == 3 and W.ONE.depth == 0
    assert W.DistanceWord.from_json(json.loads(json.dumps(w.to_json()))) == w
    assert W.pythag(W.sqrt3(), W.ONE).depth == 2


# -- canonical constructions --------------------------------------------------

def test_base_word():
    s = built("1")
    assert W.stats(s)["point_count"] == 2
    assert W.stats(s)["unit_pair_count"] == 1
    assert W.stats(s)["tower_height"] == 0
    assert s.provenance == {} and s.unit_pairs()[0].provenance is None


def test_sqrt3_figure():
    s = built("sqrt3")
    check_sound(s)
    st = W.stats(s)
    assert (st["point_count"], st["unit_pair_count"], st["derived_pair_count"]) == (7, 11, 2)
    assert has_point(s, ZERO, ZERO) and has_point(s, SQRT3, ZERO)
    assert has_point(s, SQRT3 * HALF, ONE * HALF) and has_point(s, SQRT3 * HALF, -ONE * HALF)
    ty = [(x, y) for x, y in s.points.values() if x == SQRT3 * mpq(5, 6)]
    assert len(ty) == 1
    g = ty[0][1]
    assert g * g == mpq(11, 12) and sign(g) == 1
    x, y = (s.points[e] for e in s.endpoints)
    derived = {frozenset((p.a, p.b)) for p in s.derived_pairs()}
    lx, ly = s.endpoints
    lty = W.point_label(*ty[0])
    assert derived == {frozenset((lx, ly)), frozenset((lx, lty))}
    assert all(p.dist2 == 3 for p in s.derived_pairs())


def test_sqrt3_caption_pairs_present():
    s = built("sqrt3")
    node = s.provenance[s.root]
    assert node.rule == "sqrt3" and len(node.constraints) == 11
    assert all(sub == W.ONE for _, _, sub in node.constraints)


def test_double_figure():
    s = built("double")
    check_sound(s)
    for x, y in [(0, 0), (2, 0), (1, 0)]:
        assert has_point(s, ONE * x, ONE * y)
    assert has_point(s, ONE * HALF, SQRT3 * HALF)
    assert has_point(s, ONE * mpq(3, 2), SQRT3 * HALF)
    node = s.provenance[s.root]
    assert node.rule == "double"
    subs = sorted(str(sub) for _, _, sub in node.constraints)
    assert subs.count("1") == 7 and subs.count("√3") == 2
    lab = {k: W.point_label(ONE * a, b) for k, (a, b) in
           {"x": (0, ZERO), "y": (2, ZERO), "p2": (HALF, SQRT3 * HALF), "p3": (mpq(3, 2), SQRT3 * HALF)}.items()}
    for a, b in (("x", "p3"), ("y", "p2")):
        p = s.pairs[W._pair_key(lab[a], lab[b])]
        assert p.dist2 == 3 and p.role == "derived"


def test_pythag_figure():
    s = W.build_canonical(W.pythag(W.double(), W.ONE))  # sqrt(4 - 1)
    check_sound(s)
    assert W.value(s.word) == SQRT3
    node = s.provenance[s.root]
    assert node.rule == "pythag" and len(node.constraints) == 5


@pytest.mark.parametrize("name,expected", [
    ("1", (2, 1, 0)), ("sqrt3", (7, 11, 2)), ("double", (11, 19, 5)), ("triple", (44, 95, 22)),
    ("sqrt2", (22, 41, 10)), ("(1,0)", (191, 399, 94)), ("(1,1)", (2004, 4281, 1020)),
])
def test_regression_counts(name, expected):
    # measured once and frozen; a change here means the construction changed
    s = built(name)
    st = W.stats(s)
    assert (st["point_count"], st["unit_pair_count"], st["derived_pair_count"]) == expected


@pytest.mark.parametrize("name", ["sqrt3", "double", "triple", "sqrt2", "t", "(0,2)", "(1,1)"])
def test_built_sets_are_sound(name):
    check_sound(built(name))


def test_triple_is_two_sqrt3_steps():
    s = built("triple")
    assert s.provenance[s.root].rule == "sqrt3"
    assert W.stats(s)["point_count"] <= 7 + 11 * 5


def test_interleaved_words():
    s = W.build_canonical(W.two_sqrt2_over_3(W.sqrt3()))
    check_sound(s)
    assert W.value(s.word) == W.value(W.from_kl(1, 1))


def test_monotone_counts():
    pairs = [("sqrt3", "triple"), ("1", "sqrt3"), ("t", "(1,1)"), ("sqrt3", "(1,1)"), ("sqrt3", "double")]
    for small, big in pairs:
        assert len(built(big)) >= len(built(small))


def test_depth_guard(monkeypatch):
    with pytest.raises(W.CapacityError):
        W.build_canonical(W.from_kl(2, 2))
    monkeypatch.setenv(W.DEPTH_ENV, "1")
    assert W.default_depth_limit() == 1
    with pytest.raises(W.CapacityError):
        W.build_canonical(W.from_kl(1, 1))
    assert len(W.build_canonical(W.sqrt3())) == 7


# -- placement and merging ---------------------------------------------------

def test_build_between_rotation():
    s = W.build_between((ZERO, ZERO), (ZERO, SQRT3), W.sqrt3())
    check_sound(s)
    can = built("sqrt3")
    rotated = {((-y).key(), x.key()) for x, y in can.points.values()}
    assert coords(s) == rotated
    assert s.points[s.endpoints[1]] == (ZERO, SQRT3)


def test_build_between_translation():
    s = W.build_between((ONE, 2 * ONE), (1 + SQRT3, 2 * ONE), W.sqrt3())
    can = built("sqrt3")
    assert coords(s) == {((x + 1).key(), (y + 2).key()) for x, y in can.points.values()}
    assert _counts(s) == _counts(can)


def _counts(s):
    return {k: v for k, v in W.stats(s).items() if k != "max_coefficient_bits"}


def test_build_between_general_motion_is_equivariant():
    # direction (3/5, 4/5) scaled to length sqrt3
    x = (ONE * mpq(1, 7), -SQRT2)
    y = (x[0] + SQRT3 * mpq(3, 5), x[1] + SQRT3 * mpq(4, 5))
    s = W.build_between(x, y, W.sqrt3())
    check_sound(s)
    can = built("sqrt3")
    assert _counts(s) == _counts(can)
    assert sorted(p.dist2.key() for p in s.pairs.values()) == sorted(p.dist2.key() for p in can.pairs.values())


def test_build_between_preconditions():
    with pytest.raises(W.PreconditionError):
        W.build_between((ZERO, ZERO), (ZERO, ZERO), W.sqrt3())
    with pytest.raises(W.PreconditionError):
        W.build_between((ZERO, ZERO), (2 * ONE, ZERO), W.sqrt3())


def test_build_between_in_a_foreign_tower():
    # endpoints live in Q(sqrt5), which is not a prefix of the builder's tower
    t5, g5 = adjoin_sqrt(QQ, 5)
    s = W.build_between((g5, t5.zero()), (g5 + 2, t5.zero()), W.double())
    check_sound(s)
    assert len(s) == 11
    assert s.points[s.endpoints[0]][0] * s.points[s.endpoints[0]][0] == 5


def test_merge_idempotent():
    s = built("sqrt3")
    m = W.merge([s, s])
    assert coords(m) == coords(s) and set(m.pairs) == set(s.pairs)


def test_merge_two_segments():
    a = W.build_between((ZERO, ZERO), (ONE, ZERO), W.ONE)
    b = W.build_between((ZERO, ZERO), (ZERO, ONE), W.ONE)
    m = W.merge([a, b])
    assert len(m) == 3 and len(m.pairs) == 2


def test_merge_of_unit_subsets_recovers_figure():
    s = built("sqrt3")
    parts = [W.build_between(s.points[p.a], s.points[p.b], W.ONE) for p in s.unit_pairs()]
    m = W.merge(parts)
    assert len(m) == 7 and len(m.unit_pairs()) == 11
    assert coords(m) == coords(s)


def test_labels_stable_under_lifting():
    t, _ = adjoin_sqrt(BASE_TOWER, 1 + SQRT2)
    x, y = SQRT3 * HALF, ONE * HALF
    assert W.point_label(x, y) == W.point_label(x.lift(t), y.lift(t))


# -- audits catch tampering ---------------------------------------------------

def test_soundness_detects_moved_point():
    s = built("sqrt3")
    bad = W.from_json(W.to_json(s))
    lab = next(l for l in bad.points if l not in bad.endpoints)
    x, y = bad.points[lab]
    bad.points[lab] = (x + mpq(1, 10 ** 9), y)
    assert W.soundness_failures(bad)


def test_audit_detects_missing_constraint():
    s = built("sqrt3")
    bad = W.from_json(W.to_json(s))
    victim = next(k for k, p in bad.pairs.items() if p.role == "unit")
    del bad.pairs[victim]
    assert any("missing" in msg for msg in W.audit_provenance(bad))


# -- export ---------------------------------------------------------------

@pytest.mark.parametrize("name", ["1", "sqrt3", "double", "sqrt2"])
def test_json_round_trip_and_schema(name):
    s = built(name)
    obj = W.to_json(s)
    jsonschema.validate(obj, load_schema("witness_set"))
    back = W.from_json(json.loads(json.dumps(obj)))
    assert W.dumps(back) == W.dumps(s)
    check_sound(back)


def test_json_is_deterministic():
    assert W.dumps(W.build_canonical(W.double())) == W.dumps(W.build_canonical(W.double()))


def test_dot_export():
    dot = W.to_dot(built("sqrt3"))
    edges = [l for l in dot.splitlines() if " -- " in l]
    assert len(edges) == 13
    assert sum("dashed" in e for e in edges) == 2


def test_svg_export():
    svg = W.to_svg(built("sqrt3"))
    assert 'viewBox="0 0 800 800"' in svg and svg.count("<line") == 13


def test_json_coefficients_are_exact():
    s = built("sqrt3")
    obj = W.to_json(s)
    tower = tw.decode_tower(obj["tower"])
    assert tower is s.tower
