import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import connected_graphs, diamond, path
from labelcast.generators import random_tree
from labelcast.graph import build_graph, compute_levels
from labelcast.separability import (
    MalformedSeparation,
    SearchInfeasible,
    Separation,
    check_separation,
    find_separation,
    first_level_split,
    format_separation,
    is_level_separable,
    parse_separation,
)


def first_parts(sep):
    return {u for a, _ in sep.parts.values() for u in a}


def test_tree_with_everything_in_first_part_accepted():
    import random

    g = random_tree(20, random.Random(3))
    lv = compute_levels(g)
    sep = Separation.from_first_parts(lv, {i: lv.buckets[i] for i in range(1, lv.eccentricity)})
    assert check_separation(lv, sep)


def test_path_with_empty_first_parts_accepted():
    lv = compute_levels(path(4))
    sep = Separation.from_first_parts(lv, {})
    assert sep.parts[1] == (frozenset(), frozenset({1}))
    assert check_separation(lv, sep)


def test_diamond_both_in_first_part_rejected_with_witness():
    lv = compute_levels(diamond())
    verdict = check_separation(lv, Separation.from_first_parts(lv, {1: {1, 2}}))
    assert not verdict
    assert verdict.witness == 3 and verdict.level == 2


def test_diamond_search_splits_a_from_b():
    sep = find_separation(compute_levels(diamond()))
    assert sep.parts[1] == (frozenset({1}), frozenset({2}))


# level 1 = {1, 2, 3}; sons 4, 5, 6 have parent pairs {1,2}, {2,3}, {1,3}.
# A two-parent son needs its parents in different parts, and a triangle is not 2-colourable.
ODD_CYCLE = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (2, 5), (3, 5), (1, 6), (3, 6)]


def test_four_parents_split_one_against_three():
    g = build_graph(6, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (2, 5), (3, 5), (4, 5)], 0)
    sep = find_separation(compute_levels(g))
    assert sep.parts[1][0] == frozenset({1})


def test_odd_cycle_not_separable():
    g = build_graph(7, ODD_CYCLE, 0)
    assert find_separation(compute_levels(g)) is None
    assert not oracles.separable_by_enumeration(g)


def test_malformed_separations():
    lv = compute_levels(path(4))
    with pytest.raises(MalformedSeparation):
        check_separation(lv, Separation({1: (frozenset({1}), frozenset())}))
    with pytest.raises(MalformedSeparation):
        check_separation(lv, Separation({1: (frozenset({1}), frozenset({1})), 2: (frozenset(), frozenset({2}))}))
    with pytest.raises(MalformedSeparation):
        check_separation(lv, Separation({1: (frozenset(), frozenset({2})), 2: (frozenset(), frozenset({1}))}))


def test_search_cap():
    # 30 nodes at level 1, each pair joined below by a shared son
    n_mid = 30
    edges = [(0, i) for i in range(1, n_mid + 1)]
    nxt = n_mid + 1
    for i in range(1, n_mid + 1, 2):
        edges += [(i, nxt), (i + 1, nxt)]
        nxt += 1
    g = build_graph(nxt, edges, 0)
    lv = compute_levels(g)
    with pytest.raises(SearchInfeasible) as exc:
        find_separation(lv, cap=24)
    assert exc.value.size == 30 and exc.value.cap == 24
    assert find_separation(lv, cap=30) is not None


def test_refutation_beats_cap():
    # level 1 is refuted by the odd cycle; level 3 has 30 nodes
    edges = list(ODD_CYCLE)
    wide = list(range(7, 37))
    edges += [(4, u) for u in wide]
    edges += [(u, 37) for u in wide]
    g = build_graph(38, edges, 0)
    lv = compute_levels(g)
    assert len(lv.buckets[3]) == 30 and lv.eccentricity == 4
    assert find_separation(lv, cap=10) is None


@given(connected_graphs(), st.randoms(use_true_random=False))
def test_checker_matches_definition(g, rnd):
    lv = compute_levels(g)
    first = {i: [u for u in lv.buckets[i] if rnd.random() < 0.5] for i in range(1, lv.eccentricity)}
    sep = Separation.from_first_parts(lv, first)
    chosen = first_parts(sep)
    verdict = check_separation(lv, sep)
    assert bool(verdict) == oracles.separation_ok(g, chosen)
    if not verdict:
        assert verdict.witness == oracles.first_violation(g, chosen)


@given(connected_graphs(max_nodes=12))
def test_search_matches_enumeration(g):
    lv = compute_levels(g)
    sep = find_separation(lv)
    assert (sep is not None) == oracles.separable_by_enumeration(g)
    assert is_level_separable(lv) == (sep is not None)
    if sep is not None:
        assert check_separation(lv, sep)
        for i in range(1, lv.eccentricity):
            assert sep.parts[i][0] == oracles.first_split_by_enumeration(g, i)


@given(connected_graphs(max_nodes=12))
def test_first_level_split_is_first_in_order(g):
    lv = compute_levels(g)
    for i in range(1, lv.eccentricity):
        assert first_level_split(lv, i) == oracles.first_split_by_enumeration(g, i)


@given(connected_graphs())
def test_trees_always_separable(g):
    # keep only a BFS tree
    lv = compute_levels(g)
    tree_edges = [(u, min(lv.parents[u])) for u in range(g.node_count) if lv.level[u] > 0]
    t = build_graph(g.node_count, tree_edges, g.source)
    assert find_separation(compute_levels(t)) is not None


@given(connected_graphs())
def test_format_round_trip(g):
    lv = compute_levels(g)
    sep = find_separation(lv)
    if sep is None:
        return
    text = format_separation(sep)
    again = parse_separation(text)
    assert again == sep
    assert format_separation(again) == text


def test_format_example():
    sep = find_separation(compute_levels(diamond()))
    assert format_separation(sep) == "level 1 part1: 1 part2: 2\n"


@pytest.mark.parametrize("text", ["levl 1 part1: 1 part2: 2", "level x part1: part2:", "level 1 part1: 1\nlevel 1 part1: part2: 1"])
def test_parse_errors(text):
    with pytest.raises(MalformedSeparation):
        parse_separation(text)
