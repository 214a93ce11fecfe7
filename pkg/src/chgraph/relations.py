"""WDVV and Getzler checks, by potentials (PDE route) and by marked graphs.

The PDE value of a stratum is assembled from its dual graph: every vertex of
genus g with k half-edges contributes a k-th derivative of F_g, every edge an
inverse metric, and the whole variant is divided by the order of its
automorphism group (parallel edges and self-loops).  Summing over the distinct
leg labelings gives the stratum.

The graph route evaluates the marked templates below with e on every leaf
(simplest mode) or with O_l(e) on leaves, O_c on black and O_0 on white edges
(general mode).  A template's weight is 1/|Aut| of the template graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional, Sequence

from .algebra import CHAlgebra, satisfies_one_twelfth
from .core import ONE, ZERO, GradedVariables, InputError, Series, SuperVector
from .evaluator import compute_potential, evaluate_graph
from .graphs import Graph, automorphism_order
from .homotopy import compute_operators
from .report import Report

B, W, I = "Black", "White", "Identity"


# ------------------------------------------------------------ strata

@dataclass(frozen=True)
class DualGraphStratum:
    name: str
    genera: tuple       # per vertex
    leg_counts: tuple   # per vertex
    edges: tuple        # (u, v), self-loops allowed

    def __post_init__(self):
        if sum(self.leg_counts) != 4 and self.name != "M04":
            raise InputError("strata of M_{1,4} carry four legs")
        for v, g in enumerate(self.genera):
            half = sum((a == v) + (b == v) for a, b in self.edges)
            if 2 * g - 2 + half + self.leg_counts[v] <= 0:
                raise InputError(f"unstable vertex {v} in {self.name}")

    def variants(self) -> list:
        """Distinct leg labelings as tuples of per-vertex leg sets, with |Aut|."""
        return _variants(self)


STRATA = {
    "D22": DualGraphStratum("D22", (1, 0, 0), (0, 2, 2), ((0, 1), (0, 2))),
    "D23": DualGraphStratum("D23", (1, 0, 0), (1, 1, 2), ((0, 1), (1, 2))),
    "D24": DualGraphStratum("D24", (1, 0, 0), (0, 2, 2), ((0, 1), (1, 2))),
    "D34": DualGraphStratum("D34", (1, 0, 0), (0, 1, 3), ((0, 1), (1, 2))),
    "D03": DualGraphStratum("D03", (0, 0), (1, 3), ((0, 0), (0, 1))),
    "D04": DualGraphStratum("D04", (0, 0), (0, 4), ((0, 0), (0, 1))),
    "Db": DualGraphStratum("Db", (0, 0), (2, 2), ((0, 1), (0, 1))),
}
GETZLER_COEFFS = {"D22": 12, "D23": -4, "D24": -2, "D34": 6, "D03": 1, "D04": 1, "Db": -2}
STRATA_ORDER = ("D22", "D23", "D24", "D34", "D03", "D04", "Db")


def _dual_aut(genera, legsets, edges) -> int:
    """Automorphisms of a dual graph with labeled legs (vertex perms x edge perms)."""
    n = len(genera)
    count = 0
    for perm in itertools.permutations(range(n)):
        if any(genera[perm[v]] != genera[v] or legsets[perm[v]] != legsets[v] for v in range(n)):
            continue
        mapped = sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges)
        if mapped == sorted(tuple(sorted(e)) for e in edges):
            count += 1
    mult = 1
    es = [tuple(sorted(e)) for e in edges]
    for e in set(es):
        k = es.count(e)
        mult *= factorial(k) * (2 ** k if e[0] == e[1] else 1)
    return count * mult


def _variants(s: DualGraphStratum) -> list:
    seen = {}
    for perm in itertools.permutations(range(4)):
        sets, pos = [], 0
        for c in s.leg_counts:
            sets.append(frozenset(perm[pos:pos + c]))
            pos += c
        key = _canon_variant(s, tuple(sets))
        if key not in seen:
            seen[key] = tuple(sets)
    out = []
    for key in sorted(seen, key=str):
        sets = seen[key]
        out.append((sets, _dual_aut(s.genera, sets, s.edges)))
    return out


def _canon_variant(s, sets):
    best = None
    for perm in itertools.permutations(range(len(s.genera))):
        inv = {perm[v]: v for v in range(len(perm))}
        if any(s.genera[perm[v]] != s.genera[v] for v in range(len(perm))):
            continue
        if sorted(tuple(sorted((perm[a], perm[b]))) for a, b in s.edges) != \
                sorted(tuple(sorted(e)) for e in s.edges):
            continue
        code = tuple(tuple(sorted(sets[inv[v]])) for v in range(len(perm)))
        if best is None or code < best:
            best = code
    return best


class _Derivs:
    def __init__(self, F: Series):
        self.F = F
        self.cache = {}

    def __call__(self, idx) -> Series:
        key = tuple(sorted(idx))
        if key not in self.cache:
            self.cache[key] = self.F.derivatives(key)
        return self.cache[key]


def stratum_to_pde(stratum: DualGraphStratum, F0: Series, F1: Series, eta_inv, legs: Sequence[int],
                   D: Optional[int] = None, derivs=None) -> Series:
    """Value of the stratum on the leg indices legs[0..3] (even variables only)."""
    vars = F0.vars
    if any(vars.parities):
        raise InputError("PDE translation implemented for even variables only")
    n = vars.n
    dF = derivs or (_Derivs(F0), _Derivs(F1))
    D = min(F0.D, F1.D) if D is None else D
    total = Series.zero(vars, D)
    pairs = [(a, b, eta_inv[a][b]) for a in range(n) for b in range(n) if eta_inv[a][b]]
    for sets, aut in stratum.variants():
        for choice in itertools.product(pairs, repeat=len(stratum.edges)):
            idx = [[legs[l] for l in sorted(sets[v])] for v in range(len(stratum.genera))]
            coef = Fraction(1, aut)
            for (u, v), (a, b, c) in zip(stratum.edges, choice):
                idx[u].append(a)
                idx[v].append(b)
                coef *= c
            term = Series.const(vars, D, coef)
            for v, g in enumerate(stratum.genera):
                term = term * dF[g](idx[v]).truncate(D)
                if term.is_zero():
                    break
            total = total + term
    return total


def pde_potentials(alg: CHAlgebra, D: int):
    """F0 to degree D+5 and F1 to degree D+2: enough for every stratum at degree D."""
    return compute_potential(alg, 0, D + 5), compute_potential(alg, 1, D + 2)


# ------------------------------------------------------------- WDVV

def _eta_inv(alg: CHAlgebra):
    if alg.eta_inv is None:
        raise InputError("pairing on H0 is degenerate")
    return alg.eta_inv


def _series_lead(s: Series):
    m = s.leading_monomial()
    return None if m is None else s.vars.format(m)


def check_wdvv_pde(alg: CHAlgebra, D: int, F0: Optional[Series] = None) -> Report:
    rep = Report(f"wdvv_pde:{alg.name}")
    vars = alg.variables()
    if any(vars.parities) or alg.active is not None:
        raise InputError("PDE route needs every H0 coordinate and even H0: use check_wdvv_graph")
    F0 = F0 if F0 is not None else compute_potential(alg, 0, D + 3)
    d3 = _Derivs(F0)
    eta_inv = _eta_inv(alg)
    n = vars.n
    pairs = [(a, b, eta_inv[a][b]) for a in range(n) for b in range(n) if eta_inv[a][b]]

    def channel(i, j, k, l):
        s = Series.zero(vars, D)
        for a, b, c in pairs:
            s = s + (d3((i, j, a)).truncate(D) * d3((b, k, l)).truncate(D)).scale(c)
        return s

    bad = None
    for i, j, k, l in itertools.combinations_with_replacement(range(n), 4):
        c1, c2, c3 = channel(i, j, k, l), channel(i, k, j, l), channel(i, l, j, k)
        if not (c1 == c2 == c3):
            r = c1 - c2 if c1 != c2 else c1 - c3
            bad = {"indices": [vars.names[x] for x in (i, j, k, l)], "leading": _series_lead(r)}
            break
    rep.add("wdvv_three_channels_equal", bad is None, degree=D, witness=bad)
    return rep


def four_point_graph(channel: Sequence[str], marking: str = W) -> Graph:
    """Two vertices joined by one edge; leaves (p, q | r, s)."""
    p, q, r, s = channel
    return Graph(2, ((0, 1, marking),), ((0, p), (0, q), (1, r), (1, s)))


def wdvv_graph_channels(alg: CHAlgebra, a, b, c, d, D: int, ops=None, general: bool = True):
    """The three channel values with O_l-wrapped leaves and an O_0 edge."""
    vars = alg.variables()
    vals = {}
    for lab, x in zip("abcd", (a, b, c, d)):
        v = SuperVector.constant(alg.space, vars, D, x if isinstance(x, dict) else {x: ONE})
        vals[lab] = ops.Ol.apply(v) if general else v
    over = {W: ops.O0} if general else None
    out = []
    for ch in (("a", "b", "c", "d"), ("a", "c", "b", "d"), ("a", "d", "b", "c")):
        out.append(evaluate_graph(alg, four_point_graph(ch), vals, D, weight=1, operators=over))
    return out


def check_wdvv_graph(alg: CHAlgebra, D: int, quadruples=None, ops=None) -> Report:
    rep = Report(f"wdvv_graph:{alg.name}")
    for x in (quadruples or []):
        for i in x:
            if i not in alg.h0:
                raise InputError("WDVV graph inputs must lie in H0")
    ops = ops or compute_operators(alg, D)
    quads = quadruples or list(itertools.combinations_with_replacement(alg.coords, 4))
    bad = bad0 = None
    for q in quads:
        c = wdvv_graph_channels(alg, *q, D, ops)
        if not (c[0] == c[1] == c[2]):
            bad = bad or {"inputs": [alg.labels[i] for i in q], "leading": _series_lead(c[0] - c[1] if c[0] != c[1] else c[0] - c[2])}
        c0 = wdvv_graph_channels(alg, *q, 0, ops, general=False)
        if not (c0[0] == c0[1] == c0[2]):
            bad0 = bad0 or {"inputs": [alg.labels[i] for i in q]}
    rep.add("wdvv_graph_three_channels_equal", bad is None, degree=D, witness=bad)
    rep.add("simplest_case_int_tu_Pi0_vw_symmetric", bad0 is None, degree=0, witness=bad0)
    return rep


def check_wdvv_routes_agree(alg: CHAlgebra, D: int, ops=None, F0=None) -> Report:
    """Graph channel int O_l a O_l b O_0(O_l c O_l d) equals the eta-contraction of third derivatives."""
    rep = Report(f"wdvv_routes:{alg.name}")
    vars = alg.variables()
    if alg.active is not None:
        rep.skip("wdvv_graph_equals_pde_channel", "PDE route needs every H0 coordinate")
        return rep
    ops = ops or compute_operators(alg, D)
    F0 = F0 if F0 is not None else compute_potential(alg, 0, D + 3)
    d3 = _Derivs(F0)
    n = vars.n
    eta_inv = _eta_inv(alg)
    bad = None
    for q in itertools.combinations_with_replacement(range(n), 4):
        i, j, k, l = q
        pde = Series.zero(vars, D)
        for a in range(n):
            for b in range(n):
                if eta_inv[a][b]:
                    pde = pde + (d3((i, j, a)).truncate(D) * d3((b, k, l)).truncate(D)).scale(eta_inv[a][b])
        g = wdvv_graph_channels(alg, *(alg.coords[t] for t in q), D, ops)[0]
        if g != pde:
            bad = {"indices": [vars.names[t] for t in q], "leading": _series_lead(g - pde)}
            break
    rep.add("wdvv_graph_equals_pde_channel", bad is None, degree=D, witness=bad)
    return rep


# ------------------------------------------------------ Delta templates

def _g(n, edges, leaves):
    return Graph(n, tuple(edges), tuple(leaves))


_E2 = lambda v: [(v, "e"), (v, "e")]

DELTA_TEMPLATES = {
    "D22": [_g(4, [(0, 1, B), (0, 1, B), (0, 2, W), (1, 3, W)], _E2(2) + _E2(3)),
            _g(4, [(0, 0, B), (0, 1, B), (1, 2, W), (1, 3, W)], _E2(2) + _E2(3))],
    "D23": [_g(4, [(0, 1, B), (0, 1, B), (1, 2, W), (2, 3, W)], [(0, "e"), (2, "e")] + _E2(3)),
            _g(4, [(0, 0, B), (0, 1, B), (1, 2, W), (2, 3, W)], [(1, "e"), (2, "e")] + _E2(3))],
    "D24": [_g(4, [(0, 0, B), (0, 1, W), (1, 2, B), (1, 3, W)], _E2(2) + _E2(3)),
            _g(4, [(0, 0, B), (0, 1, W), (1, 2, B), (2, 3, W)], [(1, "e"), (2, "e")] + _E2(3))],
    "D34": [_g(4, [(0, 0, B), (0, 1, W), (1, 2, W), (2, 3, B)], [(1, "e"), (2, "e")] + _E2(3))],
    "D03": [_g(4, [(0, 0, W), (0, 1, B), (1, 2, W), (2, 3, B)], [(1, "e"), (2, "e")] + _E2(3)),
            _g(4, [(0, 1, W), (0, 1, B), (1, 2, W), (2, 3, B)], [(0, "e"), (2, "e")] + _E2(3))],
    "D04": [_g(4, [(0, 0, W), (0, 1, W), (1, 2, B), (1, 3, B)], _E2(2) + _E2(3)),
            _g(4, [(0, 0, W), (0, 1, W), (1, 2, B), (2, 3, B)], [(1, "e"), (2, "e")] + _E2(3))],
    "Db": [_g(4, [(0, 1, B), (0, 2, W), (1, 2, W), (2, 3, B)], [(0, "e"), (1, "e")] + _E2(3)),
           _g(4, [(0, 1, B), (1, 2, W), (2, 3, B), (0, 3, W)], [(0, "e"), (1, "e"), (2, "e"), (3, "e")]),
           _g(4, [(0, 1, B), (1, 2, W), (1, 2, W), (2, 3, B)], _E2(0) + _E2(3))],
}

# Genus-one graphs with four e-leaves and no white edge; "Identity" on a loop
# is the empty loop closed by a supertrace.
P_CANDIDATES = {
    "A1": _g(2, [(0, 0, B), (0, 1, B)], [(1, "e")] * 4),
    "A2": _g(2, [(0, 0, B), (0, 1, B)], [(0, "e")] + [(1, "e")] * 3),
    "A3": _g(2, [(0, 0, B), (0, 1, B)], _E2(0) + _E2(1)),
    "A4": _g(2, [(0, 1, B), (0, 1, B)], [(0, "e")] + [(1, "e")] * 3),
    "A5": _g(2, [(0, 1, B), (0, 1, B)], _E2(0) + _E2(1)),
    "B1": _g(3, [(0, 0, I), (0, 1, B), (1, 2, B)], [(1, "e")] + [(2, "e")] * 3),
    "B2": _g(3, [(0, 0, I), (0, 1, B), (1, 2, B)], _E2(1) + _E2(2)),
    "B3": _g(3, [(0, 0, I), (0, 1, B), (1, 2, B)], [(0, "e"), (1, "e")] + _E2(2)),
    "B4": _g(3, [(0, 0, I), (0, 1, B), (0, 2, B)], _E2(1) + _E2(2)),
}

# P_1..P_9 as candidate names (see scripts/identify_p_graphs.py).
P_TEMPLATES = {"P1": "A1", "P2": "A2", "P3": "A3", "P4": "A5", "P5": "A4",
               "P6": "B2", "P7": "B1", "P8": "B3", "P9": "B4"}
P_ORDER = tuple(f"P{i}" for i in range(1, 10))

F = Fraction
DECOMPOSITION_TABLE = {
    "D22": (F(1, 16), 0, F(-1, 8), F(1, 16), 0, 0, 0, 0, F(1, 192)),
    "D23": (F(1, 4), F(-1, 4), 0, 0, F(1, 4), 0, 0, 0, 0),
    "D24": (F(-1, 8), F(1, 4), 0, 0, 0, 0, F(-1, 48), 0, 0),
    "D34": (0, F(-1, 12), F(1, 4), 0, 0, F(-1, 48), F(1, 144), 0, 0),
    "D03": (0, 0, 0, 0, 0, F(1, 4), F(-1, 12), F(-1, 4), 0),
    "D04": (0, 0, 0, 0, 0, F(-1, 8), 0, F(1, 4), F(1, 16)),
    "Db": (0, 0, 0, F(3, 8), F(-1, 2), 0, 0, 0, F(1, 16)),
}


def getzler_combination_of_table(table=None) -> tuple:
    table = table or DECOMPOSITION_TABLE
    return tuple(sum(GETZLER_COEFFS[s] * F(table[s][k]) for s in STRATA_ORDER) for k in range(9))


def template_weights() -> dict:
    return {s: [F(1, automorphism_order(g)) for g in gs] for s, gs in DELTA_TEMPLATES.items()}


def evaluate_delta_cycles(alg: CHAlgebra, e, D: int = 0, mode: str = "simplest", ops=None) -> dict:
    """Seven Series: each stratum's templates with weights 1/|Aut|."""
    vars = alg.variables()
    ev = SuperVector.constant(alg.space, vars, D, e if isinstance(e, dict) else {e: ONE})
    if mode == "simplest":
        vals, over = {"e": ev.truncate(0)}, None
        D = 0
    elif mode == "general":
        ops = ops or compute_operators(alg, D)
        vals, over = {"e": ops.Ol.apply(ev)}, {B: ops.Oc, W: ops.O0}
    else:
        raise InputError(f"unknown mode {mode!r}")
    out = {}
    for s in STRATA_ORDER:
        tot = Series.zero(vars, D)
        for g in DELTA_TEMPLATES[s]:
            tot = tot + evaluate_graph(alg, g, vals, D, operators=over)
        out[s] = tot
    return out


def evaluate_p_graphs(alg: CHAlgebra, e, D: int = 0, mode: str = "simplest", ops=None) -> dict:
    vars = alg.variables()
    ev = SuperVector.constant(alg.space, vars, D, e if isinstance(e, dict) else {e: ONE})
    if mode == "simplest":
        vals, over, D = {"e": ev.truncate(0)}, None, 0
    else:
        ops = ops or compute_operators(alg, D)
        vals, over = {"e": ops.Ol.apply(ev)}, {B: ops.Oc}
    out = {}
    for p in P_ORDER:
        out[p] = evaluate_graph(alg, P_CANDIDATES[P_TEMPLATES[p]], vals, D, weight=1, operators=over)
    return out


def evaluate_p_candidates(alg: CHAlgebra, e) -> dict:
    vars = alg.variables()
    ev = SuperVector.constant(alg.space, vars, 0, e)
    return {k: evaluate_graph(alg, g, {"e": ev}, 0, weight=1) for k, g in P_CANDIDATES.items()}


def identify_p_assignments(alg: CHAlgebra, es: Sequence[dict], fixed: Optional[dict] = None) -> list:
    """Every map P_i -> candidate (extending ``fixed``) under which the table holds on es."""
    zero = alg.variables().zero_monomial()
    samples = []
    for e in es:
        d = evaluate_delta_cycles(alg, e, 0)
        c = evaluate_p_candidates(alg, e)
        samples.append(({k: v.coefficient(zero) for k, v in d.items()},
                        {k: v.coefficient(zero) for k, v in c.items()}))
    fixed = dict(fixed or {})
    free_p = [p for p in P_ORDER if p not in fixed]
    free_c = [c for c in P_CANDIDATES if c not in fixed.values()]
    found = []
    for perm in itertools.permutations(free_c, len(free_p)):
        m = dict(fixed, **dict(zip(free_p, perm)))
        if all(d[s] == sum(F(DECOMPOSITION_TABLE[s][i]) * c[m[P_ORDER[i]]] for i in range(9))
               for d, c in samples for s in STRATA_ORDER):
            found.append(m)
    return found


def decompose_in_p_basis(alg: CHAlgebra, es: Sequence[dict], D: int = 0) -> Report:
    """Check every Delta against the table's P-combination on the given leaf vectors."""
    rep = Report(f"p_decomposition:{alg.name}")
    if not satisfies_one_twelfth(alg):
        for s in STRATA_ORDER:
            rep.skip(f"{s}_equals_P_combination", "1/12 axiom fails on this algebra")
        return rep
    for s in STRATA_ORDER:
        bad = None
        for k, e in enumerate(es):
            d = evaluate_delta_cycles(alg, e, D, "simplest")[s]
            p = evaluate_p_graphs(alg, e, D)
            comb = sum((p[P_ORDER[i]].scale(DECOMPOSITION_TABLE[s][i]) for i in range(9)),
                       Series.zero(d.vars, 0))
            if d != comb:
                bad = {"sample": k, "delta": str(d), "combination": str(comb)}
                break
        rep.add(f"{s}_equals_P_combination", bad is None, degree=0, witness=bad)
    comb = getzler_combination_of_table()
    rep.add("getzler_combination_of_rows_is_zero", all(c == 0 for c in comb),
            detail=[str(c) for c in comb])
    return rep


# -------------------------------------------------------------- Getzler

def _polarize(fn, xs: Sequence[dict]) -> dict:
    """Multilinear part of homogeneous quartics: signed sum over subsets.

    ``fn`` maps a leaf vector to a dict of Series; the result has the same keys.
    """
    total = None
    for r in range(1, 5):
        for sub in itertools.combinations(range(4), r):
            v = {}
            for t in sub:
                for k, c in xs[t].items():
                    v[k] = v.get(k, ZERO) + c
            vals = {k: x.scale((-1) ** (4 - r)) for k, x in fn(v).items()}
            total = vals if total is None else {k: total[k] + vals[k] for k in total}
    return total


def getzler_graph_values(alg: CHAlgebra, quad: Sequence[int], D: int, ops=None,
                         cache: Optional[dict] = None) -> dict:
    """Polarized general-mode Delta values; ``cache`` is shared across quadruples."""
    ops = ops or compute_operators(alg, D)
    cache = {} if cache is None else cache

    def fn(v):
        key = tuple(sorted(v.items()))
        if key not in cache:
            cache[key] = evaluate_delta_cycles(alg, v, D, "general", ops)
        return cache[key]

    return _polarize(fn, [{i: ONE} for i in quad])


def getzler_pde_values(alg: CHAlgebra, legs: Sequence[int], D: int, F0=None, F1=None, derivs=None) -> dict:
    if F0 is None or F1 is None:
        F0, F1 = pde_potentials(alg, D)
    derivs = derivs or (_Derivs(F0), _Derivs(F1))
    return {s: stratum_to_pde(STRATA[s], F0, F1, _eta_inv(alg), legs, D, derivs) for s in STRATA_ORDER}


def _combine(vals: dict, vars, D) -> Series:
    tot = Series.zero(vars, D)
    for s in STRATA_ORDER:
        tot = tot + vals[s].scale(GETZLER_COEFFS[s])
    return tot


def check_getzler(alg: CHAlgebra, D: int, route: str = "pde", quadruples=None,
                  require_one_twelfth: bool = True) -> Report:
    rep = Report(f"getzler_{route}:{alg.name}")
    holds12 = satisfies_one_twelfth(alg)
    vars = alg.variables()
    n = vars.n
    bad = None
    if route == "pde":
        if any(vars.parities) or alg.active is not None:
            rep.skip("getzler_residual_zero", "PDE route needs every H0 coordinate and even H0")
            return rep
        F0, F1 = pde_potentials(alg, D)
        derivs = (_Derivs(F0), _Derivs(F1))
        quads = quadruples or list(itertools.combinations_with_replacement(range(n), 4))
        for q in quads:
            r = _combine(getzler_pde_values(alg, q, D, F0, F1, derivs), vars, D)
            if not r.is_zero():
                bad = {"indices": [vars.names[t] for t in q], "leading": _series_lead(r), "residual": str(r)}
                break
    elif route == "graph":
        ops = compute_operators(alg, D)
        cache = {}
        quads = quadruples or list(itertools.combinations_with_replacement(alg.coords, 4))
        for q in quads:
            r = _combine(getzler_graph_values(alg, q, D, ops, cache), vars, D)
            if not r.is_zero():
                bad = {"inputs": [alg.labels[t] for t in q], "leading": _series_lead(r), "residual": str(r)}
                break
    else:
        raise InputError(f"unknown route {route!r}")
    ok = bad is None
    if holds12:
        rep.add("getzler_residual_zero", ok, degree=D, witness=bad)
    elif require_one_twelfth:
        rep.skip("getzler_residual_zero", "1/12 axiom fails on this algebra", degree=D)
        rep.note("getzler_residual_without_one_twelfth", degree=D,
                 detail={"residual_zero": ok, "witness": bad})
    else:
        rep.add("getzler_residual_zero", ok, degree=D, witness=bad)
    return rep


def check_getzler_routes_agree(alg: CHAlgebra, D: int, quadruples=None) -> Report:
    """Per stratum: polarized general-mode graphs equal the PDE translation."""
    rep = Report(f"getzler_routes:{alg.name}")
    vars = alg.variables()
    if any(vars.parities) or alg.active is not None:
        rep.skip("strata_routes_agree", "PDE route needs every H0 coordinate and even H0")
        return rep
    F0, F1 = pde_potentials(alg, D)
    derivs = (_Derivs(F0), _Derivs(F1))
    ops = compute_operators(alg, D)
    quads = quadruples or list(itertools.combinations_with_replacement(range(vars.n), 4))
    bad, cache = {}, {}
    for q in quads:
        pde = getzler_pde_values(alg, q, D, F0, F1, derivs)
        gr = getzler_graph_values(alg, [alg.coords[t] for t in q], D, ops, cache)
        for s in STRATA_ORDER:
            if s not in bad and pde[s] != gr[s]:
                bad[s] = {"indices": [vars.names[t] for t in q], "pde": str(pde[s]), "graph": str(gr[s])}
    for s in STRATA_ORDER:
        rep.add(f"{s}_routes_agree", s not in bad, degree=D, witness=bad.get(s))
    return rep
