from fractions import Fraction

import pytest

from chgraph.algebra import validate_algebra
from chgraph.core import SuperVector
from chgraph.graphs import Graph, automorphism_order
from chgraph.homotopy import (
    check_maurer_cartan, check_operator_identities, compute_gamma, compute_operators, gamma_term_table,
)
from chgraph.mutations import MUTATIONS

from conftest import SMALL, alg, spec


@pytest.mark.parametrize("name", SMALL)
def test_maurer_cartan_to_degree_5(name):
    rep = check_maurer_cartan(alg(name), 5)
    assert rep.passed, rep.human()


def test_frobenius_gamma_is_E():
    a = alg("frobenius2")
    assert compute_gamma(a, 5) == a.E(a.variables(), 5)


def _rooted_shape(g: Graph):
    # (vertices, sorted multiset of leaf counts) identifies the rooted trees up to degree 4
    return g.n_vertices, tuple(sorted(sum(1 for v, l in g.leaves if v == w and l == "E")
                                      for w in range(g.n_vertices)))


def test_gamma_tree_coefficients():
    table = gamma_term_table(alg("block8"), 4)
    assert table[0] == ("E", 1)
    weights = [w for _, w in table[1:]]
    assert sorted(weights) == sorted([Fraction(1, 2), Fraction(1, 2), Fraction(1, 8), Fraction(1, 2)])
    # the balanced degree-4 tree carries 1/8: root vertex with two subtrees of two leaves each
    for g, w in table[1:]:
        if g.n_vertices == 3 and _rooted_shape(g)[1] == (0, 2, 2):
            assert w == Fraction(1, 8)
            assert automorphism_order(g) == 8


def test_gamma_degree_two_term():
    a = alg("block8")
    vars = a.variables()
    g = compute_gamma(a, 2)
    E = a.E(vars, 2)
    assert g.homogeneous(2) == a.op("K", vars, 2).apply(a.vmul(E, E)).scale(Fraction(1, 2)).homogeneous(2)


def test_gamma_balanced_degree_four_term():
    # 1/8 K(K(E^2) . K(E^2)) is the only degree-4 term that does not nest
    a = alg("block8")
    vars = a.variables()
    K = a.op("K", vars, 4)
    E = a.E(vars, 4)
    h = Fraction(1, 2)
    g2 = K.apply(a.vmul(E, E)).scale(h)
    g3 = K.apply(a.vmul(E, g2))
    want = (K.apply(a.vmul(g2, g2)).scale(h) + K.apply(a.vmul(E, g3))).homogeneous(4)
    assert compute_gamma(a, 4).homogeneous(4) == want


def test_seven_term_mutation_keeps_mc_on_small_fixture():
    # K has rank one on block7, so the broken triple never reaches gamma
    m = next(m for m in MUTATIONS if m.target == "seven_term_relation")
    a = m.build(spec(m.fixture))
    assert validate_algebra(a).status("seven_term_relation") == "fail"
    assert check_maurer_cartan(a, 4).passed


@pytest.mark.parametrize("name", SMALL)
def test_operator_identities_to_degree_3(name):
    rep = check_operator_identities(alg(name), 3)
    assert rep.passed, rep.human()
    assert rep.status("QOl") == "pass" and rep.status("QO0") == "pass"


def test_qoc_single_reading_on_block7():
    rep = check_operator_identities(alg("block7"), 3)
    assert rep.status("QOc_exactly_one_reading") == "pass"
    assert rep.get("QOc_exactly_one_reading").detail["holding_readings"] == ["A"]


def test_ol_degree_one_part():
    a = alg("block7")
    vars = a.variables()
    ops = compute_operators(a, 1)
    K = a.op("K", vars, 1)
    E = a.E(vars, 1)
    for x in range(a.dim):
        v = SuperVector.basis(a.space, vars, 1, x)
        assert ops.Ol.apply(v).homogeneous(1) == K.apply(a.vmul(E, v)).homogeneous(1)


def test_degree_zero_parts():
    a = alg("block8")
    ops = compute_operators(a, 2)
    assert ops.O0.degree_part(0) == a.Pi0
    assert ops.Ol.degree_part(0) == {i: {i: 1} for i in range(a.dim)}
