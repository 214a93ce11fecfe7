"""The vector gamma and the dressed operators Gamma, O_l, O_c, O_r, O_0."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import CHAlgebra
from .core import SuperOperator, SuperVector
from .graphs import enumerate_graphs
from .report import Report

HALF = Fraction(1, 2)


def compute_gamma(alg: CHAlgebra, D: int) -> SuperVector:
    """Fixed point of gamma = E + 1/2 K(gamma^2), exact through degree D."""
    vars = alg.variables()
    E = alg.E(vars, D)
    K = alg.op("K", vars, D)
    gamma = E
    for _ in range(D):
        nxt = E + K.apply(alg.vmul(gamma, gamma)).scale(HALF)
        if nxt == gamma:
            break
        gamma = nxt
    return gamma


def rooted_value(alg: CHAlgebra, graph, root_label: str, leaf_values, D: int) -> SuperVector:
    """Vector emitted at the root leaf of a tree (product at its vertex, no K)."""
    from .evaluator import _TreeEval, marking_operator
    vars = next(iter(leaf_values.values())).vars
    ops = {m: marking_operator(alg, m, vars, D) for _, _, m in graph.edges}
    root_v = next(v for v, l in graph.leaves if l == root_label)
    others = tuple((v, l) for v, l in graph.leaves if l != root_label)
    trimmed = type(graph)(graph.n_vertices, graph.edges, others)
    ev = _TreeEval(alg, trimmed, leaf_values, ops, vars, D)
    return ev.product(ev.factors(root_v, None))


def gamma_tree_sum(alg: CHAlgebra, D: int) -> SuperVector:
    """Oracle: E plus K applied to every rooted tree, weighted by 1/|Aut|."""
    vars = alg.variables()
    E = alg.E(vars, D)
    K = alg.op("K", vars, D)
    total = E
    for n in range(2, D + 1):
        for cls in enumerate_graphs(n + 1, ["E"] * n + ["R"], 0):
            v = rooted_value(alg, cls.graph, "R", {"E": E}, D)
            total = total + K.apply(v).scale(Fraction(1, cls.aut_order))
    return total


def gamma_term_table(alg: CHAlgebra, D: int = 4) -> list:
    """(tree description, 1/|Aut|) for the rooted trees of gamma up to degree D."""
    out = [("E", Fraction(1))]
    for n in range(2, D + 1):
        for cls in enumerate_graphs(n + 1, ["E"] * n + ["R"], 0):
            out.append((cls.graph, Fraction(1, cls.aut_order)))
    return out


def _first_bad(v: SuperVector):
    m = v.leading_monomial()
    return None if m is None else v.vars.format(m)


def check_maurer_cartan(alg: CHAlgebra, D: int, gamma: Optional[SuperVector] = None) -> Report:
    rep = Report(f"maurer_cartan:{alg.name}")
    gamma = gamma or compute_gamma(alg, D)
    vars = gamma.vars
    Gm, Q = alg.op("Gm", vars, D), alg.op("Q", vars, D)
    r1 = Gm.apply(gamma)
    r2 = Q.apply(gamma) + Gm.apply(alg.vmul(gamma, gamma)).scale(HALF)
    rep.add("Gminus_gamma_zero", r1.is_zero(), degree=D, residual_leading_monomial=_first_bad(r1))
    rep.add("Q_gamma_plus_half_Gminus_gamma2_zero", r2.is_zero(), degree=D,
            residual_leading_monomial=_first_bad(r2))
    oracle = gamma_tree_sum(alg, D)
    rep.add("gamma_equals_rooted_tree_sum", oracle == gamma, degree=D,
            residual_leading_monomial=_first_bad(oracle - gamma))
    return rep


@dataclass(frozen=True)
class HomotopyOperators:
    gamma: SuperVector
    Gamma: SuperOperator
    Ol: SuperOperator
    Oc: SuperOperator
    Or: SuperOperator
    O0: SuperOperator
    L_gamma: SuperOperator


def compute_operators(alg: CHAlgebra, D: int, gamma: Optional[SuperVector] = None) -> HomotopyOperators:
    gamma = gamma or compute_gamma(alg, D)
    vars = gamma.vars
    K = alg.op("K", vars, D)
    Lg = alg.vleft_mult(gamma)
    Gamma = K.compose(Lg)
    Id = SuperOperator.identity(alg.space, vars, D)
    Ol, P = Id, Id
    for _ in range(D):
        P = P.compose(Gamma)
        if P.is_zero():
            break
        Ol = Ol + P
    Oc = Ol.compose(K)
    Or = Id + Lg.compose(Oc)
    O0 = Ol.compose(alg.op("Pi0", vars, D)).compose(Or)
    return HomotopyOperators(gamma, Gamma, Ol, Oc, Or, O0, Lg)


def _op_first_bad(A: SuperOperator):
    m = A.leading_monomial()
    return None if m is None else A.vars.format(m)


def graded_commutator(A: SuperOperator, B: SuperOperator) -> SuperOperator:
    AB, BA = A.compose(B), B.compose(A)
    return AB + BA if (A.parity & B.parity) else AB - BA


def check_operator_identities(alg: CHAlgebra, D: int, ops: Optional[HomotopyOperators] = None) -> Report:
    rep = Report(f"operator_identities:{alg.name}")
    ops = ops or compute_operators(alg, D)
    vars = ops.gamma.vars
    Q, Gm, Gp = alg.op("Q", vars, D), alg.op("Gm", vars, D), alg.op("Gp", vars, D)
    Id = SuperOperator.identity(alg.space, vars, D)
    Lg = ops.L_gamma
    K = alg.op("K", vars, D)

    # QO_l(a) = -G-(gamma . O_l(a)) on H0
    bad = None
    for a in alg.h0:
        x = ops.Ol.apply(SuperVector.basis(alg.space, vars, D, a))
        r = Q.apply(x) + Gm.apply(alg.vmul(ops.gamma, x))
        if not r.is_zero():
            bad = {"a": alg.labels[a], "leading": _first_bad(r)}
            break
    rep.add("QOl", bad is None, degree=D, witness=bad)

    comm = graded_commutator(Q, ops.Oc)
    base = Gm.compose(Lg).compose(ops.Oc).scale(-1) - Gm
    read_a = base - ops.Oc.compose(Lg).compose(Gm)
    read_b = base - Lg.compose(Gm)
    ra, rb = comm - read_a, comm - read_b
    holds = [n for n, r in (("A", ra), ("B", rb)) if r.is_zero()]
    for name, r, text in (("A", ra, "[Q,O_c] = -G-(gamma.O_c h) - O_c(gamma.G- h) - G- h"),
                          ("B", rb, "[Q,O_c] = -G-(gamma.O_c h) - gamma.G- h - G- h")):
        rep.note(f"QOc_reading_{name}", degree=D, residual_leading_monomial=_op_first_bad(r),
                 detail={"formula": text, "holds": r.is_zero()})
    if read_a == read_b:
        rep.skip("QOc_exactly_one_reading", "the two readings coincide on this algebra", degree=D)
    else:
        rep.add("QOc_exactly_one_reading", len(holds) == 1, degree=D,
                detail={"holding_readings": holds})

    X = ops.Ol.compose(Gp).compose(ops.Or)
    rhs = (ops.Ol + ops.Or - Id - graded_commutator(Q, X)
           + X.compose(Lg).compose(Gm) - Gm.compose(Lg).compose(X))
    r0 = ops.O0 - rhs
    rep.add("QO0", r0.is_zero(), degree=D, residual_leading_monomial=_op_first_bad(r0))

    r = ops.Or.compose(Gm) - Gm
    rep.add("Or_Gminus_equals_Gminus", r.is_zero(), degree=D, residual_leading_monomial=_op_first_bad(r))
    r = ops.Ol.compose(K).compose(Lg) - (ops.Ol - Id)
    rep.add("Ol_K_gamma_equals_Ol_minus_Id", r.is_zero(), degree=D, residual_leading_monomial=_op_first_bad(r))
    d0 = ops.O0.degree_part(0)
    rep.add("O0_degree0_is_Pi0", d0 == {j: c for j, c in alg.Pi0.items()}, degree=0)
    rep.add("Ol_degree0_is_Id", ops.Ol.degree_part(0) == {i: {i: 1} for i in range(alg.dim)}, degree=0)
    return rep
