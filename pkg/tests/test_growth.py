import math

import pytest

from hyperbasis import bounds, growth, hypmodel
from hyperbasis.errors import BoundViolation, EmbeddingError, InputError
from hyperbasis.spheremap import ComponentKind, classify_components


def test_regular_g2_golden_sequence():
    m = hypmodel.regular_model(2)
    log = growth.simulate(m)
    half_side = math.acosh(2.0) / 2.0
    assert log.M == 5
    expected = [
        ("pair", 1, 2, False, 2),
        ("pair", 6, 1, True, 1),
        ("pair", 3, 2, True, 1),
        ("pair", 4, 3, True, 1),
        ("pair", 5, 4, True, 1),
    ]
    for ev, (kind, i, j, frozen, k) in zip(log.events, expected):
        assert (ev.kind, ev.i, ev.j, ev.other_frozen, ev.k) == (kind, i, j, frozen, k)
        assert ev.r == pytest.approx(half_side, abs=1e-12)
        assert ev.r == pytest.approx(0.6584789, abs=1e-7)
    assert log.consumed_total() == 6
    assert log.j_final() == 5
    assert [ev.j_before for ev in log.events] == [0, 2, 3, 4, 5]


def test_first_radius_below_acosh2():
    for g in range(2, 13):
        log = growth.simulate(hypmodel.regular_model(g))
        assert log.events[0].r < math.acosh(2.0)


@pytest.mark.parametrize("g", range(2, 13))
def test_regular_soundness(g):
    log = growth.simulate(hypmodel.regular_model(g))
    assert g + 1 <= log.M <= 2 * g + 2
    assert log.consumed_total() == 2 * g + 2
    assert log.j_final() in (2 * g, 2 * g + 1)
    radii = [ev.r for ev in log.events]
    assert all(a <= b + 1e-12 for a, b in zip(radii, radii[1:]))
    report = growth.verify_radius_bounds(log)
    assert all(row["slack"] >= -1e-9 for row in report)


def test_determinism_byte_identical():
    from hyperbasis import jsonio

    m = hypmodel.regular_model(5)
    a = jsonio.dumps(growth.log_to_dict(growth.simulate(m)))
    b = jsonio.dumps(growth.log_to_dict(growth.simulate(hypmodel.regular_model(5))))
    assert a == b


def test_tampered_log_violates_bound():
    log = growth.simulate(hypmodel.regular_model(2))
    bad = growth.GrowthLog(
        genus=2,
        model="tampered",
        events=[growth.GrowthEvent(1, "pair", 1, 2, False, 10.0, 2, 0)]
        + [
            growth.GrowthEvent(ev.m, ev.kind, ev.i, ev.j, ev.other_frozen, 10.0, ev.k, ev.j_before)
            for ev in log.events[1:]
        ],
    )
    with pytest.raises(BoundViolation) as exc:
        growth.verify_radius_bounds(bad)
    assert exc.value.step == 1


def forced_selftouch_model():
    n = 6
    dist = [[0.0 if a == b else 2.0 for b in range(n)] for a in range(n)]
    return hypmodel.load_synthetic(
        {
            "genus": 2,
            "distances": dist,
            "loop_radii": [0.3, 0.35, 0.4, 0.45, 0.5, 0.55],
            "arcs": [
                {"kind": "loop", "i": 1, "enclosed": []},
                {"kind": "loop", "i": 2, "enclosed": [1]},
                {"kind": "loop", "i": 3, "enclosed": []},
                {"kind": "loop", "i": 4, "enclosed": []},
                {"kind": "loop", "i": 5, "enclosed": []},
                {"kind": "loop", "i": 6, "enclosed": []},
            ],
        }
    )


def test_synthetic_forced_self_touch():
    m = forced_selftouch_model()
    log = growth.simulate(m)
    first = log.events[0]
    assert (first.kind, first.i, first.k, first.r) == ("self", 1, 1, 0.3)
    assert log.M == 6 and log.consumed_total() == 6


def test_fig4_style_synthetic_log():
    """Two quick bones, then loops around them: the block picture."""
    n = 6
    dist = [[0.0 if a == b else 2.0 for b in range(n)] for a in range(n)]
    dist[1][2] = dist[2][1] = 0.4
    dist[4][5] = dist[5][4] = 0.4
    m = hypmodel.load_synthetic(
        {
            "genus": 2,
            "distances": dist,
            "loop_radii": [0.5, 10.0, 10.0, 0.55, 10.0, 10.0],
            "arcs": [
                {"kind": "edge", "i": 2, "j": 3},
                {"kind": "edge", "i": 5, "j": 6},
                {"kind": "loop", "i": 1, "enclosed": [2, 3]},
                {"kind": "loop", "i": 4, "enclosed": [5, 6]},
            ],
        }
    )
    log = growth.simulate(m)
    assert [(ev.kind, ev.i) for ev in log.events] == [
        ("pair", 2),
        ("pair", 5),
        ("self", 1),
        ("self", 4),
    ]
    growth.verify_radius_bounds(log)
    graph = growth.arc_graph(log, m)
    kinds = classify_components(graph)
    assert sorted(k.value for k in kinds) == ["loop", "loop", "tree", "tree"]
    from hyperbasis.spheremap import region_tree

    tree = region_tree(graph, graph.arcs.keys())
    assert len(tree.nodes) == 3


def test_arc_graph_regular_path():
    m = hypmodel.regular_model(2)
    graph = growth.arc_graph(growth.simulate(m), m)
    assert graph.euler_summary() == (6, 5, 1, 1)
    assert classify_components(graph) == [ComponentKind.TREE]
    assert {(a.u, a.v) for a in graph.arcs.values()} == {
        (1, 2), (6, 1), (2, 3), (3, 4), (4, 5)
    }


def test_log_roundtrip_and_validation():
    m = hypmodel.regular_model(3)
    log = growth.simulate(m)
    back = growth.log_from_dict(growth.log_to_dict(log))
    assert back == log
    with pytest.raises(InputError):
        growth.log_from_dict({"genus": 3, "events": []})
    mangled = growth.log_to_dict(log)
    mangled["events"][0]["k"] = 1
    with pytest.raises(InputError):
        growth.log_from_dict(mangled)


def test_missing_arc_descriptor():
    m = forced_selftouch_model()
    m.arc_table = m.arc_table[:1]
    log = growth.simulate(m)
    with pytest.raises(EmbeddingError):
        growth.arc_graph(log, m)


def test_every_event_has_bound():
    for g in (2, 4, 8):
        log = growth.simulate(hypmodel.regular_model(g))
        for ev in log.events:
            assert ev.r <= bounds.radius_bound(g, ev.j_before) + 1e-9


def test_partial_log_single_self_touch():
    m = forced_selftouch_model()
    partial = growth.GrowthLog(
        genus=2,
        model=m.name,
        events=[growth.GrowthEvent(1, "self", 1, None, False, 0.3, 1, 0)],
    )
    graph = growth.arc_graph(partial, m)
    kinds = classify_components(graph)
    assert kinds.count(ComponentKind.LOOP) == 1
    assert kinds.count(ComponentKind.ISOLATED_VERTEX) == 5
