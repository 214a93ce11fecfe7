from fractions import Fraction
from itertools import combinations

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from chgraph.core import (
    GradedVariables, InputError, Series, SuperOperator, SuperSpace, all_monomials,
    constant_supertrace, determinant, koszul_sign, mat_identity, mat_inverse, operator_to_bivector,
    parity_operator, supertrace,
)

from conftest import alg

VARS = GradedVariables(("a", "b", "u", "v"), (0, 0, 1, 1))
D = 4
MONOS = all_monomials(VARS, D)
coef = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def series(parity=None):
    monos = MONOS if parity is None else [m for m in MONOS if VARS.parity(m) == parity]
    return st.dictionaries(st.sampled_from(monos), coef, max_size=6).map(lambda d: Series(VARS, D, d))


def brute_koszul(perm, par):
    # bubble sort the odd slots into place, counting swaps of two odd entries
    seq = list(perm)
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                if par[seq[j]] and par[seq[j + 1]]:
                    sign = -sign
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
    return sign


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(st.permutations(range(n)),
                                                      st.lists(st.integers(0, 1), min_size=n, max_size=n))))
def test_koszul_sign_matches_bubble_sort(data):
    perm, par = data
    assert koszul_sign(perm, par) == brute_koszul(perm, par)


def test_koszul_trivial_cases():
    assert koszul_sign([0, 1, 2], [1, 1, 0]) == 1
    assert koszul_sign([1, 0], [1, 1]) == -1
    assert koszul_sign([1, 0], [1, 0]) == 1
    with pytest.raises(InputError):
        koszul_sign([0, 0], [0, 0])


@settings(max_examples=150, deadline=None)
@given(series(), series(), series())
def test_series_product_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=150, deadline=None)
@given(series(), series(), series())
def test_series_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 1), st.integers(0, 1), st.data())
def test_series_graded_commutative(pa, pb, data):
    a, b = data.draw(series(pa)), data.draw(series(pb))
    assert a * b == (b * a).scale((-1) ** (pa * pb))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 1), st.integers(0, 3), st.data())
def test_derivative_leibniz(pa, i, data):
    a, b = data.draw(series(pa)), data.draw(series())
    lhs = (a * b).derivative(i).truncate(D - 1)
    rhs = (a.derivative(i) * b + (a * b.derivative(i)).scale((-1) ** (pa * VARS.parities[i]))).truncate(D - 1)
    assert lhs == rhs


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(coef, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_and_determinant_match_sympy(rows):
    M = sp.Matrix(rows)
    assert determinant(rows) == Fraction(str(M.det()))
    inv = mat_inverse(rows)
    if M.det() == 0:
        assert inv is None
    else:
        assert [[Fraction(str(x)) for x in r] for r in M.inv().tolist()] == inv


def test_series_basics():
    x = GradedVariables(("s", "t"), (0, 0))
    one = Series.const(x, 2, 1)
    s = Series.variable(x, 2, 0) + Series.variable(x, 2, 1)
    assert one * s == s
    sq = s * s
    assert sq.coefficient((2, 0)) == 1 and sq.coefficient((1, 1)) == 2 and sq.coefficient((0, 2)) == 1
    y = GradedVariables(("u",), (1,))
    u = Series.variable(y, 3, 0)
    assert (u * u).is_zero()
    with pytest.raises(InputError):
        s + u


def test_supertrace_definitions():
    sp_ = SuperSpace((0, 0, 1, 0, 1))
    assert constant_supertrace(mat_identity(5), sp_.parities) == 3 - 2
    assert constant_supertrace(parity_operator(sp_), sp_.parities) == 5
    Id = SuperOperator.identity(sp_, VARS, 2)
    assert supertrace(Id) == Series.const(VARS, 2, 1)


def test_identity_bivector_is_inverse_metric():
    a = alg("frobenius2")
    biv = operator_to_bivector(mat_identity(2), a.gram, a.space)
    inv = mat_inverse(a.gram)
    assert {k: v for k, v in biv.entries.items()} == {(i, j): inv[i][j] for i in range(2) for j in range(2) if inv[i][j]}
    assert operator_to_bivector({}, a.gram, a.space).is_zero()


@pytest.mark.parametrize("j", range(8))
def test_propagator_bivector_contracts_back(j):
    # <[A], (e_i, . )> recovers A on the basis: A e_j = sum_a B[a][b] (e_b, e_j) e_a
    a = alg("block8")
    biv = operator_to_bivector(a.K, a.gram, a.space)
    got = {}
    for (x, y), c in biv.entries.items():
        g = a.gram[y][j]
        if g:
            got[x] = got.get(x, 0) + c * g
    want = a.K.get(j, {})
    assert {k: v for k, v in got.items() if v} == want
