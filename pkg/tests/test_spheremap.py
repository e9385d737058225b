import json
import random

import pytest

from hyperbasis import families
from hyperbasis import spheremap as sm
from hyperbasis.errors import EmbeddingError, InputError
from mapfactory import bones, hexagon_sub, polygon_cycle, sibling_loops


def test_hexagon_cycle_euler():
    m = polygon_cycle(6)
    v, e, f, c = m.euler_summary()
    assert (v, e, f, c) == (6, 6, 2, 1)
    assert v - e + f == 1 + c


def test_path_submap_face_count():
    p = hexagon_sub({1, 2, 3, 4, 5})
    assert p.euler_summary() == (6, 5, 1, 1)
    assert sm.classify_components(p) == [sm.ComponentKind.TREE]


def test_two_disjoint_loops_euler():
    b = sm.MapBuilder(range(1, 7))
    b.add_loop(1, 1, set())
    b.add_loop(2, 2, set())
    m = b.finalize()
    v, e, f, c = m.euler_summary()
    assert (v - e + f, c) == (1 + c, 6)  # 2 loops + 4 isolated vertices
    assert f == 3


def test_from_json_roundtrip():
    m = families.block_family(3)
    data = m.to_dict()
    again = sm.from_json(json.dumps(data))
    assert again.to_dict() == data


def test_from_json_rejects_garbage():
    with pytest.raises(InputError):
        sm.from_json("{truncated")
    with pytest.raises(InputError):
        sm.from_json(json.dumps({"vertices": "nope"}))


def test_from_json_rejects_nonplanar_k5():
    rot = {v: [] for v in range(1, 7)}
    arcs = []
    d = 0
    for u in range(1, 6):
        for w in range(u + 1, 6):
            arcs.append({"id": len(arcs) + 1, "darts": [d, d + 1], "kind": "edge"})
            rot[u].append(d)
            rot[w].append(d + 1)
            d += 2
    data = {
        "genus": 2,
        "vertices": [
            {"id": v, "cone": True, "rotation": rot[v]} for v in range(1, 7)
        ],
        "arcs": arcs,
        "regions": [{"faces": [0], "isolated": [6]}],
    }
    with pytest.raises(EmbeddingError):
        sm.from_json(json.dumps(data))


def test_disconnected_requires_regions():
    m = bones([(1, 2), (3, 4)], 4)
    data = m.to_dict()
    del data["regions"]
    with pytest.raises(EmbeddingError):
        sm.from_json(json.dumps(data))


def test_classification_shapes():
    b = sm.MapBuilder(range(1, 11))
    b.add_bone(1, 1, 2)                       # single edge: a tree
    b.add_loop(2, 3, set())                   # loop
    b.add_bone(3, 4, 5)
    b.attach_edge(4, 6, 5, 0)                 # 2-edge tree
    b.add_loop(5, 7, set())
    b.attach_edge(6, 8, 7, 0)                 # looped tree
    m = b.finalize()
    kinds = sm.classify_components(m)
    assert kinds == [
        sm.ComponentKind.TREE,
        sm.ComponentKind.LOOP,
        sm.ComponentKind.TREE,
        sm.ComponentKind.LOOPED_TREE,
        sm.ComponentKind.ISOLATED_VERTEX,
        sm.ComponentKind.ISOLATED_VERTEX,
    ]


def test_theta_graph_invalid():
    arcs = {
        i + 1: sm.Arc(id=i + 1, kind="edge", u=1, v=2, darts=(2 * i, 2 * i + 1))
        for i in range(3)
    }
    rot = {1: [0, 2, 4], 2: [5, 3, 1], 3: [], 4: []}
    theta = sm.SphereMap(
        rot,
        arcs,
        {v: True for v in rot},
        regions=[
            {"faces": [0], "isolated": []},
            {"faces": [1], "isolated": [3]},
            {"faces": [3], "isolated": [4]},
        ],
    )
    kinds = sm.classify_components(theta)
    assert kinds[0] is sm.ComponentKind.INVALID


def test_growth_outputs_classify_clean():
    rng = random.Random(4)
    for _ in range(50):
        m = families.random_growth_map(rng, rng.choice([4, 6, 8, 10]))
        assert sm.ComponentKind.INVALID not in sm.classify_components(m)


def test_region_tree_nested_siblings():
    m = families.block_family(2)
    tree = sm.region_tree(m, [2, 4])        # the two loops
    assert len(tree.nodes) == 3
    levels = sorted(tree.levels.values())
    assert levels == [0, 1, 2]
    root = tree.nodes[tree.root]
    assert tree.levels[tree.root] == 2
    assert root.boundary == [2]             # loop with the smallest base


def test_region_tree_empty_loop_set():
    m = bones([(1, 2), (3, 4), (5, 6)], 6)
    tree = sm.region_tree(m, m.arcs.keys())
    assert len(tree.nodes) == 1
    assert tree.levels == {0: 0}


def test_region_tree_deep_levels():
    # four nested loops: levels 0..4 across five regions
    b = sm.MapBuilder(range(1, 11))
    b.add_loop(1, 1, set())
    b.add_loop(2, 2, {1})
    b.add_loop(3, 3, {1, 2})
    b.add_loop(4, 4, {1, 2, 3})
    m = b.finalize()
    tree = sm.region_tree(m, m.arcs.keys())
    assert sorted(tree.levels.values()) == [0, 1, 2, 3, 4]
    # each non-extremal region has one neighbor exactly one level up
    for nid, node in tree.nodes.items():
        ups = []
        for lam in node.boundary:
            a, b2 = tree.loop_sides[lam]
            other = b2 if a == nid else a
            if tree.levels[other] > tree.levels[nid]:
                ups.append(tree.levels[other])
        if tree.levels[nid] < max(tree.levels.values()):
            assert ups == [tree.levels[nid] + 1]


def test_units_and_census():
    m = families.block_family(2)
    tree = sm.region_tree(m, m.arcs.keys())
    for nid in tree.nodes:
        assert tree.census(nid) == 6
    disk_units = {
        frozenset(c for _, c in tree.units(nid)) for nid in tree.nodes
    }
    assert frozenset({3}) in disk_units      # middle region: two odd clusters


def test_parity_examples():
    # three bones: units {2,2,2}, no odd curve anywhere
    m3 = bones([(1, 2), (3, 4), (5, 6)], 6)
    assert not sm.is_nonseparating(m3, m3.arcs.keys())
    # two bones and two bare vertices: odd singleton units
    m2 = bones([(1, 2), (3, 4)], 6)
    assert sm.is_nonseparating(m2, m2.arcs.keys())
    tree = sm.region_tree(m2, m2.arcs.keys())
    (nid,) = tree.nodes
    assert sm.region_admits_odd_curve(m2, m2.arcs.keys(), nid)
    # empty subgraph: the bare vertices already provide odd units
    assert sm.is_nonseparating(m2, [])


def test_block_family_separating_until_pruned():
    m = families.block_family(2)
    assert not sm.is_nonseparating(m, m.arcs.keys())
    assert sm.is_nonseparating(m, [1, 3])


def test_attached_branch_is_not_a_unit():
    """A tree hanging off a loop base cannot be cut off alone: the curve
    would have to cross the stem."""
    b = sm.MapBuilder(range(1, 7))
    b.add_bone(1, 2, 3)
    b.add_loop(2, 1, {2, 3})
    outer = b.region_of_vertex(4)
    b.attach_edge(3, 4, 1, at=b.corners_on_region(1, outer)[0])
    m = b.finalize()
    tree = sm.region_tree(m, m.arcs.keys())
    inner = next(n for n in tree.nodes if tree.nodes[n].pieces
                 and tree.nodes[n].pieces[0].attach_base is None)
    outer_node = next(n for n in tree.nodes if n != inner)
    labels = [lab for lab, _ in tree.units(outer_node)]
    assert all(not lab.startswith("piece") for lab in labels)
    # the outer cluster swallows the branch: 1 base + 2 beyond + 1 branch
    assert ("loop:2", 4) in tree.units(outer_node)


def test_invalid_subgraph_rejected():
    m = polygon_cycle(6)
    with pytest.raises(InputError):
        sm.region_tree(m, m.arcs.keys())     # the full cycle is not a growth shape


def test_without_arcs_updates_regions():
    m = families.block_family(2)
    sub = m.without_arcs({2})        # drop one loop
    v, e, f, c = sub.euler_summary()
    assert v - e + f == 1 + c
    sub2 = sub.without_arcs({4})
    assert len(sub2.regions) == 1


def test_sibling_loops_map():
    m = sibling_loops(8)
    assert m.euler_summary() == (8, 8, 9, 8)
    kinds = sm.classify_components(m)
    assert all(k is sm.ComponentKind.LOOP for k in kinds)
