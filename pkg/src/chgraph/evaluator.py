"""Contraction of marked graphs over a cH algebra, and the potentials F0, F1.

Trees are evaluated bottom-up from a root vertex: a vertex multiplies its
inputs (cut slot first, then leaves in label order, then child subtrees in
edge order) and an internal edge applies its marking's operator to the
child's vector.  At the root the product is integrated.  A genus-1 graph is
cut at its J-edge (u, v); the loop is closed as ``str(M o Phi)`` where
``Phi(h)`` is the vector leaving u when h is fed into v's cut slot and M is
the marking's operator with the J factor absorbed into the supertrace.

When leaf values are odd the result is normalized to leaves in sorted label
order by the Koszul sign of the traversal order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from .algebra import CHAlgebra
from .core import (
    ONE, GradedVariables, InputError, Series, SuperOperator, SuperVector,
    koszul_sign, mat_identity, supertrace,
)
from .graphs import Graph, IsoClass, automorphism_order, enumerate_graphs, select_j_edges

# marking -> (operator name, carries J)
_BASE = {
    "Black": ("K", False),
    "JBlack": ("K", True),
    "White": ("Pi0", False),
    "GMinus": ("Gm", False),
    "Identity": ("Id", False),
    "JIdentity": ("Id", True),
}


def marking_operator(alg: CHAlgebra, marking: str, vars: GradedVariables, D: int,
                     overrides: Optional[Mapping[str, SuperOperator]] = None) -> SuperOperator:
    if overrides and marking in overrides:
        return overrides[marking]
    if marking not in _BASE:
        raise InputError(f"unknown edge marking {marking!r}")
    name, _ = _BASE[marking]
    if name == "Id":
        return SuperOperator.identity(alg.space, vars, D)
    return alg.op(name, vars, D)


def _strip_j(marking: str) -> str:
    return {"JBlack": "Black", "JIdentity": "Identity"}.get(marking, marking)


class _TreeEval:
    def __init__(self, alg, graph, leaf_values, ops, vars, D, cut=None, inject=None):
        self.alg, self.g, self.vals, self.ops = alg, graph, leaf_values, ops
        self.vars, self.D = vars, D
        self.adj = graph.adjacency()
        self.cut = cut  # edge index removed from the tree
        self.inject = inject  # (vertex, vector) fed into the cut slot
        self.order = []  # leaf labels in traversal order

    def factors(self, v, parent_edge):
        """Inputs of v other than its parent half-edge, in contraction order."""
        out = []
        if self.inject is not None and self.inject[0] == v:
            out.append(self.inject[1])
        for w, lab in self.g.leaves:
            if w == v:
                out.append(self.vals[lab])
                self.order.append(lab)
        for w, m, k in self.adj[v]:
            if k == parent_edge or k == self.cut:
                continue
            x = self.product(self.factors(w, k))
            out.append(self.ops[m].apply(x))
        return out

    def product(self, factors):
        if not factors:
            return None
        acc = factors[0]
        for f in factors[1:]:
            acc = self.alg.vmul(acc, f, self.D)
        return acc


def _leaf_parity(vals, lab):
    p = vals[lab].parity_of()
    if p == "mixed":
        raise InputError(f"leaf value {lab!r} has mixed parity")
    return 1 if p == "odd" else 0


def _normalize(order, vals):
    if not any(_leaf_parity(vals, l) for l in set(order)):
        return 1
    ref = sorted(range(len(order)), key=lambda i: (order[i], i))
    # perm[k] = reference slot of the factor at traversal position k
    slot = {i: r for r, i in enumerate(ref)}
    perm = [slot[i] for i in range(len(order))]
    par = [0] * len(order)
    for i, l in enumerate(order):
        par[slot[i]] = _leaf_parity(vals, l)
    return koszul_sign(perm, par)


def evaluate_graph(alg: CHAlgebra, graph, leaf_values: Mapping[str, SuperVector], D: int,
                   weight=None, j_edge: Optional[int] = None,
                   operators: Optional[Mapping[str, SuperOperator]] = None) -> Series:
    """weight * contraction of the marked graph (weight defaults to 1/|Aut|)."""
    if isinstance(graph, IsoClass):
        aut = graph.aut_order
        graph = graph.graph
    else:
        aut = None
    if not graph.is_connected():
        raise InputError("graph must be connected")
    missing = {l for _, l in graph.leaves} - set(leaf_values)
    if missing:
        raise InputError(f"missing leaf values for {sorted(missing)}")
    if weight is None:
        weight = Fraction(1, aut if aut is not None else automorphism_order(graph))
    vars = next(iter(leaf_values.values())).vars if leaf_values else alg.variables()
    ops = {}
    for _, _, m in graph.edges:
        base = _strip_j(m)
        ops[m] = marking_operator(alg, base, vars, D, operators)
    g = graph.genus
    if g == 0:
        ev = _TreeEval(alg, graph, leaf_values, ops, vars, D)
        prod = ev.product(ev.factors(0, None))
        val = alg.vintegrate(prod) if prod is not None else Series.zero(vars, D)
        return val.scale(weight * _normalize(ev.order, leaf_values))
    if g != 1:
        raise InputError("only genus 0 and 1 graphs are evaluated")
    if j_edge is None:
        j_edge = select_j_edges(graph)[0]
    u, v, m = graph.edges[j_edge]
    M = ops[m]
    par = alg.parities
    total = Series.zero(vars, D)
    order = None
    for b in range(alg.dim):
        eb = SuperVector.basis(alg.space, vars, D, b)
        ev = _TreeEval(alg, graph, leaf_values, ops, vars, D, cut=j_edge, inject=(v, eb))
        factors = ev.factors(u, None)
        w = ev.product(factors)
        order = ev.order
        if w is None:
            continue
        y = M.apply(w)
        c = y.component(b)
        total = total + (c.scale(-1) if par[b] else c)
    sign = _normalize(order or [], leaf_values)
    return total.scale(weight * sign)


def potential_classes(genus: int, n: int):
    return enumerate_graphs(n, None, genus)


def compute_potential(alg: CHAlgebra, genus: int, D: int, vars: Optional[GradedVariables] = None) -> Series:
    """Sum of 1/|Aut| weighted graphs with E on all leaves, up to degree D."""
    vars = vars or alg.variables()
    E = alg.E(vars, D)
    total = Series.zero(vars, D)
    start = 3 if genus == 0 else 1
    for n in range(start, D + 1):
        for cls in enumerate_graphs(n, None, genus):
            total = total + evaluate_graph(alg, cls, {"E": E}, D)
    return total


def f1_trace_form(alg: CHAlgebra, D: int, gamma: Optional[SuperVector] = None) -> Series:
    """(1/2) sum_i (1/i) str((K o gamma.)^i)."""
    from .homotopy import compute_gamma
    vars = alg.variables()
    if gamma is None:
        gamma = compute_gamma(alg, D)
    X = alg.op("K", vars, D).compose(alg.vleft_mult(gamma))
    total = Series.zero(vars, D)
    P = X
    for i in range(1, D + 1):
        total = total + supertrace(P).scale(Fraction(1, 2 * i))
        P = P.compose(X)
        if P.is_zero():
            break
    return total


def tadpole_value(alg: CHAlgebra, a: SuperVector, D: int) -> Series:
    """(1/2) str(K o a.), the closed form of the one-leaf loop."""
    X = alg.op("K", a.vars, D).compose(alg.vleft_mult(a))
    return supertrace(X).scale(Fraction(1, 2))


def check_cross_pipeline(alg: CHAlgebra, D: int) -> "Report":
    """F1 from graphs equals the trace form; genus-1 values ignore the J-edge choice."""
    from .report import Report
    rep = Report(f"cross_pipeline:{alg.name}")
    F1 = compute_potential(alg, 1, D)
    tr = f1_trace_form(alg, D)
    rep.add("F1_equals_trace_form", F1 == tr, degree=D,
            witness=None if F1 == tr else {"graphs": str(F1), "trace": str(tr)})
    vars = alg.variables()
    E = alg.E(vars, D)
    bad, n_classes = None, 0
    for n in range(1, D + 1):
        for cls in enumerate_graphs(n, None, 1):
            n_classes += 1
            vals = [evaluate_graph(alg, cls, {"E": E}, D, j_edge=j)
                    for j in select_j_edges(cls.graph, all_choices=True)]
            if any(v != vals[0] for v in vals[1:]):
                bad = bad or {"graph": cls.graph.to_json()}
    rep.add("J_edge_choice_independent", bad is None, degree=D, witness=bad,
            detail={"classes": n_classes})
    return rep
