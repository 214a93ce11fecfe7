import pytest
from hypothesis import given, settings, strategies as st

from chgraph.core import InputError
from chgraph.graphs import (
    Graph, automorphism_order, canonical_key, count_labeled_trees_oracle, double_factorial,
    enumerate_graphs, isomorphic, select_j_edges,
)


@pytest.mark.parametrize("n,want", [(3, 1), (4, 3), (5, 15), (6, 105), (7, 945)])
def test_labeled_tree_counts(n, want):
    labels = [str(i) for i in range(1, n + 1)]
    assert double_factorial(2 * n - 5) == want
    got = enumerate_graphs(n, labels, 0)
    assert len(got) == want
    oracle = count_labeled_trees_oracle(n)
    assert len(oracle) == want
    assert {c.key for c in got} == {canonical_key(g) for g in oracle}


def test_three_leaf_vertex():
    (c,) = enumerate_graphs(3, None, 0)
    assert c.aut_order == 6
    (c,) = enumerate_graphs(3, ["a", "b", "c"], 0)
    assert c.aut_order == 1


def test_four_distinct_leaves_three_channels():
    got = enumerate_graphs(4, list("abcd"), 0)
    assert len(got) == 3 and all(c.aut_order == 1 for c in got)
    pairs = {frozenset(frozenset(l for v, l in c.graph.leaves if v == w) for w in (0, 1)) for c in got}
    assert len(pairs) == 3


def test_tadpole():
    (c,) = enumerate_graphs(1, ["a"], 1)
    assert c.aut_order == 2
    assert c.graph.edges == ((0, 0, "Black"),) and c.graph.leaves == ((0, "a"),)
    loop = [k for k, (u, v, _) in enumerate(c.graph.edges) if u == v]
    assert select_j_edges(c.graph) == loop
    assert select_j_edges(c.graph, all_choices=True) == loop


def test_caterpillar_symmetry():
    g = Graph(3, ((0, 1), (1, 2)), ((0, "a"), (0, "b"), (1, "c"), (2, "a"), (2, "b")))
    assert automorphism_order(g) == 2


def test_theta_graph():
    assert automorphism_order(Graph(2, ((0, 1), (0, 1), (0, 1)))) == 12


def test_two_cycle_j_edges():
    g = Graph(2, ((0, 1), (0, 1)), ((0, "a"), (1, "b")))
    assert select_j_edges(g, all_choices=True) == [0, 1]
    with pytest.raises(InputError):
        select_j_edges(Graph(1, (), ((0, "a"), (0, "b"), (0, "c"))))


def test_genus_one_small_counts():
    assert [c.aut_order for c in enumerate_graphs(1, None, 1)] == [2]
    assert sorted(c.aut_order for c in enumerate_graphs(2, None, 1)) == [4, 4]


def test_markings_break_symmetry():
    g = Graph(2, ((0, 1, "Black"), (0, 1, "Black")), ((0, "a"), (1, "a")))
    h = g.with_markings(["Black", "White"])
    assert automorphism_order(g) == 4
    assert automorphism_order(h) == 2


def test_bad_arguments():
    with pytest.raises(InputError):
        enumerate_graphs(3, None, 2)
    with pytest.raises(InputError):
        enumerate_graphs(3, ["a"], 0)
    with pytest.raises(InputError):
        Graph(1, ((0, 1),))


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 6).flatmap(lambda n: st.tuples(st.just(n), st.randoms(use_true_random=False))))
def test_canonical_form_invariant_under_relabeling(data):
    n, rnd = data
    classes = enumerate_graphs(n, [str(i) for i in range(n)], 0)
    c = rnd.choice(classes)
    perm = list(range(c.graph.n_vertices))
    rnd.shuffle(perm)
    h = c.graph.permuted(perm)
    assert isomorphic(c.graph, h)
    assert automorphism_order(h) == c.aut_order


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(st.just(n), st.randoms(use_true_random=False))))
def test_genus_one_classes_are_distinct(data):
    n, rnd = data
    classes = enumerate_graphs(n, None, 1)
    assert len({c.key for c in classes}) == len(classes)
    c = rnd.choice(classes)
    assert c.graph.genus == 1 and c.graph.is_connected() and c.graph.is_trivalent()
