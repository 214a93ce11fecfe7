import itertools
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from chgraph.bcov import (
    CubicAction, bcov_data, bcov_verify, generic_critical_point, generic_critical_value, random_action,
    rooted_tree_sum, unrooted_tree_sum,
)
from chgraph.core import GradedVariables, InputError, Series

from conftest import SMALL, alg


def to_sym(s: Series, S):
    return sum(sp.Rational(c.numerator, c.denominator) * sp.prod([x ** e for x, e in zip(S, m)])
               for m, c in s.terms.items())


def truncate(expr, S, D):
    if expr == 0:
        return 0
    p = sp.Poly(sp.expand(expr), *S)
    return sum(c * sp.prod([x ** e for x, e in zip(S, m)]) for m, c in p.terms() if sum(m) <= D)


def sympy_gradient_at(act: CubicAction, c):
    S = sp.symbols(f"s0:{act.vars.n}")
    X = sp.symbols(f"c0:{act.m}")
    m = act.m
    A = sum(to_sym(act.K1[i], S) * X[i] for i in range(m))
    for i, j in itertools.product(range(m), repeat=2):
        A += sp.Rational(1, 2) * (to_sym(act.K2[i][j], S) - sp.Rational(str(act.B2[i][j]))) * X[i] * X[j]
        for k in range(m):
            A += sp.Rational(1, 6) * to_sym(act.K3[i][j][k], S) * X[i] * X[j] * X[k]
    sub = {X[i]: to_sym(c[i], S) for i in range(m)}
    return [truncate(sp.diff(A, X[i]).subs(sub), S, act.D) for i in range(m)], truncate(A.subs(sub), S, act.D)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("seed", [0, 1])
def test_random_action_stationary_and_trees(m, seed):
    act = random_action(m, 4, seed)
    c, rep = generic_critical_point(act)
    assert rep.passed
    assert rooted_tree_sum(act) == c
    val, vrep = generic_critical_value(act, c)
    assert vrep.passed
    grads, value = sympy_gradient_at(act, c)
    assert all(g == 0 for g in grads)
    S = sp.symbols(f"s0:{act.vars.n}")
    assert sp.expand(value - to_sym(val, S)) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10_000))
def test_tree_sums_match_fixed_point(m, seed):
    act = random_action(m, 3, seed)
    c, rep = generic_critical_point(act)
    assert rep.passed
    assert rooted_tree_sum(act) == c
    assert unrooted_tree_sum(act) == act.value(c).truncate(3)


def _const_action(K1, K2=None, K3=None, B2=None):
    vars = GradedVariables(("s",), (0,))
    m = len(K1)
    z = Series.zero(vars, 4)
    K2 = K2 or [[z] * m for _ in range(m)]
    K3 = K3 or [[[z] * m for _ in range(m)] for _ in range(m)]
    B2 = B2 or [[Fraction(int(i == j) * (i + 2)) for j in range(m)] for i in range(m)]
    return CubicAction(vars, 4, tuple(K1), tuple(map(tuple, K2)),
                       tuple(tuple(map(tuple, r)) for r in K3), tuple(map(tuple, B2)))


def test_quadratic_action_linear_solution():
    vars = GradedVariables(("s",), (0,))
    s = Series.variable(vars, 4, 0)
    act = _const_action([s, s.scale(3)])
    c, rep = generic_critical_point(act)
    assert rep.passed
    assert c == [s.scale(Fraction(1, 2)), s]
    val = act.value(c)
    assert val == act._dot(act.K1, c).scale(Fraction(1, 2))


def test_no_source_gives_zero():
    vars = GradedVariables(("s",), (0,))
    z = Series.zero(vars, 4)
    act = _const_action([z, z])
    c, _ = generic_critical_point(act)
    assert all(x.is_zero() for x in c)
    assert act.value(c).is_zero()


def test_degenerate_b2_rejected():
    vars = GradedVariables(("s",), (0,))
    z = Series.zero(vars, 4)
    with pytest.raises(InputError):
        _const_action([z, z], B2=[[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]])


@pytest.mark.parametrize("name", SMALL)
def test_bcov_on_fixtures(name):
    rep = bcov_verify(alg(name), 4)
    assert rep.passed, rep.human()


def test_frobenius_bcov_trivial():
    data = bcov_data(alg("frobenius2"), 4)
    assert data.action.m == 0
    assert data.value([]) == data.constant
