import random

import numpy as np

from dmr.megaclouds import UnionFind, adjacency_test, merge_megaclouds


def _random_clouds(seed, m=30, labels=("a", "b", "c")):
    rng = np.random.default_rng(seed)
    return [(labels[int(rng.integers(len(labels)))], rng.uniform(-5, 5, size=2).tolist(), 1, 1.0)
            for _ in range(m)]


def _components_by_search(model):
    """Connected components of the same-class adjacency graph, found by depth-first search."""
    clouds = model.clouds()
    neighbours = {c.id: set() for c in clouds}
    for i, a in enumerate(clouds):
        for b in clouds[i + 1:]:
            if a.class_label == b.class_label and adjacency_test(a, b, clouds):
                neighbours[a.id].add(b.id)
                neighbours[b.id].add(a.id)
    seen, components = set(), set()
    for start in neighbours:
        if start in seen:
            continue
        stack, component = [start], set()
        while stack:
            node = stack.pop()
            if node in component:
                continue
            component.add(node)
            stack.extend(neighbours[node] - component)
        seen |= component
        components.add(frozenset(component))
    return components


# --------------------------
# adjacency_test
# --------------------------

def test_two_clouds_are_always_adjacent(make_model):
    model = make_model([("a", [0.0, 0.0], 1, 1.0), ("a", [100.0, -3.0], 1, 1.0)])
    a, b = model.clouds()
    assert adjacency_test(a, b, model.clouds())


def test_center_between_blocks_adjacency(make_model):
    model = make_model([("a", [0.0], 1, 1.0), ("a", [2.0], 1, 1.0), ("b", [1.0], 1, 1.0)])
    a, b, _ = model.clouds()
    assert not adjacency_test(a, b, model.clouds())


def test_far_third_center_does_not_block(make_model):
    model = make_model([("a", [0.0], 1, 1.0), ("a", [2.0], 1, 1.0), ("b", [10.0], 1, 1.0)])
    a, b, _ = model.clouds()
    assert adjacency_test(a, b, model.clouds())


def test_equidistant_third_center_blocks(make_model):
    model = make_model([("a", [0.0, 0.0], 1, 1.0), ("a", [2.0, 0.0], 1, 1.0), ("a", [1.0, 1.0], 1, 1.0)])
    a, b, _ = model.clouds()
    assert not adjacency_test(a, b, model.clouds())


# --------------------------
# merge_megaclouds
# --------------------------

def test_distinct_classes_never_merge(make_model):
    model = make_model([(label, [float(i), 0.0], 1, 1.0) for i, label in enumerate("abcde")])
    megaclouds = merge_megaclouds(model)
    assert len(megaclouds) == model.n_prototypes
    assert [mc.member_cloud_ids for mc in megaclouds] == [(1,), (2,), (3,), (4,), (5,)]


def test_chain_of_one_class_becomes_one_megacloud(make_model):
    model = make_model([("a", [float(i)], 1, 1.0) for i in range(6)])
    megaclouds = merge_megaclouds(model)
    assert len(megaclouds) == 1
    assert megaclouds[0].member_cloud_ids == (1, 2, 3, 4, 5, 6)
    assert megaclouds[0].class_label == "a"


def test_two_class_layout(make_model):
    model = make_model([("a", [0.0, 0.0], 3, 1.0), ("a", [1.0, 0.0], 2, 1.0),
                        ("b", [5.0, 0.0], 4, 1.0), ("b", [6.0, 0.0], 1, 1.0)])
    megaclouds = merge_megaclouds(model)
    assert len(megaclouds) == 2
    assert [(mc.id, mc.class_label, mc.member_cloud_ids) for mc in megaclouds] == [
        (1, "a", (1, 2)),
        (2, "b", (3, 4)),
    ]


def test_interleaved_classes_split_a_class(make_model):
    model = make_model([("a", [0.0], 1, 1.0), ("b", [1.0], 1, 1.0), ("a", [2.0], 1, 1.0)])
    megaclouds = merge_megaclouds(model)
    assert [mc.member_cloud_ids for mc in megaclouds] == [(1,), (2,), (3,)]


def test_megaclouds_match_graph_search(make_model):
    for seed in range(15):
        model = make_model(_random_clouds(seed))
        megaclouds = merge_megaclouds(model)
        index = model.cloud_index()

        assert len(megaclouds) <= model.n_prototypes
        members = [cid for mc in megaclouds for cid in mc.member_cloud_ids]
        assert sorted(members) == sorted(index)
        for mc in megaclouds:
            assert {index[cid].class_label for cid in mc.member_cloud_ids} == {mc.class_label}
        assert {frozenset(mc.member_cloud_ids) for mc in megaclouds} == _components_by_search(model)
        assert [mc.id for mc in megaclouds] == list(range(1, len(megaclouds) + 1))
        lowest = [min(mc.member_cloud_ids) for mc in megaclouds]
        assert lowest == sorted(lowest)


def test_merging_ignores_cloud_enumeration_order(make_model):
    model = make_model(_random_clouds(99))
    expected = merge_megaclouds(model)
    shuffler = random.Random(0)
    for class_model in model.classes:
        shuffler.shuffle(class_model.clouds)
    model.classes.reverse()
    assert merge_megaclouds(model) == expected


def test_union_find_groups():
    uf = UnionFind()
    for x, y in [(1, 2), (3, 4), (2, 4), (7, 8)]:
        uf.union(x, y)
    assert len({uf.find(i) for i in (1, 2, 3, 4)}) == 1
    assert uf.find(7) == uf.find(8)
    assert uf.find(1) != uf.find(7)
    assert uf.find(42) == 42
