from __future__ import annotations

import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given

from ebu.centrality import (
    CutsetViolation,
    closed_form_diameter2,
    closed_form_family,
    cutset_check,
    distinct_value_count,
    edge_betweenness,
    edge_betweenness_values,
    family_edge_betweenness,
    format_rational,
    graph_hash,
    is_edge_betweenness_uniform,
    parse_rational,
)
from ebu.graph import Graph, GraphError, circulant, diameter_info, family
from oracles import bfs_dist, brute_force_betweenness, fraction_brandes, from_nx, small_connected, to_nx
from test_graph import graphs


def test_k2_and_classics():
    assert edge_betweenness_values(family("complete", [2])) == {(0, 1): 2}
    r = edge_betweenness(circulant(15, [1, 6]))
    assert r.is_uniform and r.uniform_value == 13 and len(r.values) == 30
    r = edge_betweenness(circulant(21, [1, 6]))
    assert r.is_uniform and r.uniform_value == 22


def test_p3_follows_ordered_pair_definition():
    values = edge_betweenness_values(family("path", [3]))
    assert values == {(0, 1): 4, (1, 2): 4}
    assert values == brute_force_betweenness(family("path", [3]))


def test_uniformity_examples():
    assert is_edge_betweenness_uniform(family("complete_bipartite", [3, 3])) == (True, Fraction(14, 3))
    comp = family("complement_of_circulant", [11, 1])
    assert is_edge_betweenness_uniform(comp) == (False, None)
    assert distinct_value_count(comp) == 2
    assert distinct_value_count(family("complement_of_circulant", [11, 1, 2])) == 3
    assert is_edge_betweenness_uniform(Graph.from_edges(3, [])) == (True, None)
    assert distinct_value_count(Graph.from_edges(3, [])) == 0
    with pytest.raises(GraphError):
        edge_betweenness(Graph(0, ()))


def test_report_fields_and_json():
    r = edge_betweenness(family("path", [4]))
    assert not r.is_uniform and r.uniform_value is None
    assert r.distinct_values == ((Fraction(6), 2), (Fraction(8), 1))
    doc = r.to_json()
    assert doc["uniform"] is False and doc["value"] is None
    assert doc["edges"][0] == {"u": 0, "v": 1, "value": "6"}
    assert doc["graph_hash"] == graph_hash(family("path", [4]))
    assert sum(c for _, c in r.distinct_values) == len(r.values)


def test_rational_formatting():
    assert format_rational(Fraction(14, 3)) == "14/3"
    assert format_rational(Fraction(4)) == "4"
    assert format_rational(Fraction(-2, 4)) == "-1/2"
    assert parse_rational("28/6") == Fraction(14, 3)


def test_brute_force_agreement_all_connected_up_to_6():
    for g in small_connected(6):
        assert edge_betweenness_values(g) == brute_force_betweenness(g)


def test_fraction_brandes_agreement_n7():
    for g in small_connected(7)[-853:]:
        assert edge_betweenness_values(g) == fraction_brandes(g)


@given(graphs(max_n=11))
def test_property_matches_oracles_including_disconnected(g):
    if g.vertex_count == 0:
        return
    values = edge_betweenness_values(g)
    assert values == fraction_brandes(g)
    if g.vertex_count <= 7:
        assert values == brute_force_betweenness(g)


@pytest.mark.parametrize("seed", range(8))
def test_networkx_float_cross_check(seed):
    h = nx.gnp_random_graph(25 + seed * 5, 0.15, seed=seed)
    g = from_nx(h)
    ours = edge_betweenness_values(g)
    ref = nx.edge_betweenness_centrality(h, normalized=False)
    for (u, v), x in ref.items():
        assert float(ours[(min(u, v), max(u, v))]) == pytest.approx(2 * x, rel=1e-12)


@given(graphs(max_n=10))
def test_edge_sum_identity(g):
    if g.vertex_count == 0 or g.edge_count == 0:
        return
    values = edge_betweenness_values(g)
    total = sum(sum(d for d in bfs_dist(g, s) if d > 0) for s in range(g.vertex_count))
    assert sum(values.values()) == total


@given(graphs(max_n=10))
def test_value_two_iff_closed_neighbourhoods_agree(g):
    # an edge forming a whole component is the special case N[u] = N[v] = {u, v}
    if g.vertex_count == 0:
        return
    for (u, v), x in edge_betweenness_values(g).items():
        assert x >= 2
        twins = set(g.adjacency[u]) | {u} == set(g.adjacency[v]) | {v}
        assert (x == 2) == twins
        if len(g.adjacency[u]) == 1 and len(g.adjacency[v]) == 1:
            assert x == 2


def test_value_two_without_being_a_component():
    # the converse of "component implies 2" fails: every edge of K_3 has value 2
    assert set(edge_betweenness_values(family("complete", [3])).values()) == {2}


@pytest.mark.parametrize("n", range(2, 10))
def test_tree_formula(n):
    for t in nx.nonisomorphic_trees(n):
        g = from_nx(t)
        values = edge_betweenness_values(g)
        for (u, v), x in values.items():
            side = sum(1 for d in bfs_dist(g.remove_edges([(u, v)]), u) if d >= 0)
            assert x == 2 * side * (n - side)


def test_upper_bound_with_ordered_pairs_is_tight_on_even_path():
    # counting ordered pairs, a tree edge splitting n into n/2 + n/2 carries 2 (n/2)^2 = n^2/2
    for n in (4, 6, 8, 10):
        values = edge_betweenness_values(family("path", [n]))
        assert max(values.values()) == Fraction(n * n, 2)


def test_edge_transitive_and_distance_regular_examples_uniform():
    petersen = from_nx(nx.petersen_graph())
    assert is_edge_betweenness_uniform(petersen)[0]
    assert is_edge_betweenness_uniform(circulant(13, [1, 3, 4]))[0]


def test_closed_form_diameter2_examples():
    c5 = family("cycle", [5])
    assert closed_form_diameter2(c5, (0, 1)) == 6 == edge_betweenness_values(c5)[(0, 1)]
    k23 = family("complete_bipartite", [2, 3])
    assert closed_form_diameter2(k23, (0, 2)) == Fraction(14, 3)
    with pytest.raises(GraphError):
        closed_form_diameter2(family("complete", [4]), (0, 1))
    with pytest.raises(GraphError):
        closed_form_diameter2(family("path", [4]), (0, 1))
    with pytest.raises(GraphError):
        closed_form_diameter2(c5, (0, 2))


def test_closed_form_diameter2_small_graphs():
    for g in small_connected(7):
        info = diameter_info(g)
        if info.diameter != 2:
            continue
        values = edge_betweenness_values(g)
        for e in g.edges():
            assert closed_form_diameter2(g, e) == values[e]


def test_closed_form_family_examples():
    assert closed_form_family("complete_bipartite", [1, 5]) == 10
    assert closed_form_family("complete_minus_perfect_matching", [6]) == 3
    assert family_edge_betweenness("complete_minus_perfect_matching", [6]).uniform_value == 3
    assert closed_form_family("complete_bipartite", [50, 50]) == 2 + 2 * Fraction(49, 50) + 2 * Fraction(49, 50)
    assert family_edge_betweenness("complete_bipartite", [50, 50]).uniform_value == closed_form_family(
        "complete_bipartite", [50, 50]
    )
    for bad in (("complete_bipartite", [0, 2]), ("complete_minus_perfect_matching", [7]), ("cycle", [5])):
        with pytest.raises(GraphError):
            closed_form_family(*bad)


def test_cutset_examples():
    p3 = family("path", [3])
    c = cutset_check(p3, {1})
    assert c.lower_bound == 4 and c.cut_sum == 8 and c.strict
    k2 = family("complete", [2])
    c = cutset_check(k2, {0})
    assert c.cut_sum == 2 == c.lower_bound and c.holds and not c.strict
    c4 = family("cycle", [4])
    c = cutset_check(c4, {0, 1})
    brute = brute_force_betweenness(c4)
    assert c.lower_bound == 8 and c.cut_sum == sum(brute[e] for e in c.cut_edges) == 8
    assert c.cut_edges == ((0, 3), (1, 2))


def test_cutset_errors():
    g = family("cycle", [4])
    for bad in (set(), {0, 1, 2, 3}, {7}):
        with pytest.raises(GraphError):
            cutset_check(g, bad)
    with pytest.raises(GraphError):
        cutset_check(Graph.from_edges(4, [(0, 1), (2, 3)]), {0})


def test_cutset_violation_is_raised_for_inconsistent_values():
    g = family("path", [3])
    with pytest.raises(CutsetViolation):
        cutset_check(g, {1}, values={(0, 1): Fraction(1), (1, 2): Fraction(1)})


def test_cutset_random_property():
    rnd = random.Random(7)
    for _ in range(100):
        n = rnd.randint(2, 12)
        h = nx.connected_watts_strogatz_graph(n, 2, 0.4, seed=rnd.randint(0, 10**6)) if n > 3 else nx.path_graph(n)
        g = from_nx(h)
        x = set(rnd.sample(range(n), rnd.randint(1, n - 1)))
        assert cutset_check(g, x).holds
