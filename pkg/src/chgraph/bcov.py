"""Tree sums for cubic actions and the BCOV action of a cH algebra.

A cubic action on coordinates c (length m, even Series coefficients) is

    A(c) = K1(c) + 1/2 K2(c,c) + 1/6 K3(c,c,c) - 1/2 B2(c,c).

Its critical point solves c = b2 (K1 + K2 c + 1/2 K3 c c) with b2 = B2^-1.
The same point is also a sum over rooted trees whose non-root vertices carry
the forms and whose edges carry b2; the critical value is the sum over
unrooted trees.  Both sums are enumerated independently of the fixed point.

For the BCOV action the coordinates are the coefficients of v along the
block generators e_a whose G- image is even, and

    K1_a = 1/2 int E^2 g_a,  K2_ab = int E g_a g_b,  K3_abc = int g_a g_b g_c,

with g_a = G- e_a.  B2_ab is int Q e_a G- e_b up to the global sign fixed by
requiring G- (x) G- of b2 to be the bivector of G-G+.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import CHAlgebra
from .core import (
    ONE, ZERO, GradedVariables, InputError, Series, SuperVector, mat_inverse,
    operator_to_bivector,
)
from .evaluator import compute_potential
from .homotopy import compute_gamma
from .report import Report

HALF, SIXTH = Fraction(1, 2), Fraction(1, 6)


@dataclass(frozen=True)
class CubicAction:
    vars: GradedVariables
    D: int
    K1: tuple   # m Series
    K2: tuple   # m x m Series, symmetric
    K3: tuple   # m x m x m Series, symmetric
    B2: tuple   # m x m Fraction, symmetric, invertible

    def __post_init__(self):
        m = self.m
        if len(self.K2) != m or len(self.K3) != m or len(self.B2) != m:
            raise InputError("action tensors disagree on dimension")
        for i, j in itertools.product(range(m), repeat=2):
            if self.K2[i][j] != self.K2[j][i] or self.B2[i][j] != self.B2[j][i]:
                raise InputError("K2 and B2 must be symmetric")
            for k in range(m):
                t = self.K3[i][j][k]
                if t != self.K3[j][i][k] or t != self.K3[i][k][j]:
                    raise InputError("K3 must be symmetric")
        b2 = mat_inverse([list(r) for r in self.B2]) if m else []
        if b2 is None:
            raise InputError("B2 is degenerate")
        object.__setattr__(self, "b2", tuple(tuple(r) for r in b2))

    @property
    def m(self) -> int:
        return len(self.K1)

    def zero(self) -> Series:
        return Series.zero(self.vars, self.D)

    def _dot(self, coeffs, c) -> Series:
        out = self.zero()
        for x, y in zip(coeffs, c):
            if not x.is_zero() and not y.is_zero():
                out = out + x * y
        return out

    def value(self, c: Sequence[Series]) -> Series:
        m = self.m
        a = self._dot(self.K1, c)
        for i, j in itertools.product(range(m), repeat=2):
            a = a + (self.K2[i][j] * c[i] * c[j]).scale(HALF)
            a = a - (c[i] * c[j]).scale(HALF * self.B2[i][j])
            for k in range(m):
                if not self.K3[i][j][k].is_zero():
                    a = a + (self.K3[i][j][k] * c[i] * c[j] * c[k]).scale(SIXTH)
        return a

    def gradient(self, c: Sequence[Series]) -> list:
        """Exact partials dA/dc_i."""
        m = self.m
        out = []
        for i in range(m):
            g = self.K1[i]
            for j in range(m):
                g = g + self.K2[i][j] * c[j] - c[j].scale(self.B2[i][j])
                for k in range(m):
                    if not self.K3[i][j][k].is_zero():
                        g = g + (self.K3[i][j][k] * c[j] * c[k]).scale(HALF)
            out.append(g)
        return out

    def raise_index(self, w: Sequence[Series]) -> list:
        return [sum((w[j].scale(self.b2[i][j]) for j in range(self.m) if self.b2[i][j]), self.zero())
                for i in range(self.m)]

    def form(self, d: int, args: Sequence[Sequence[Series]]) -> list:
        """Covector K_d(args..., .)."""
        m = self.m
        if d == 1:
            return list(self.K1)
        if d == 2:
            (a,) = args
            return [self._dot([self.K2[i][j] for j in range(m)], a) for i in range(m)]
        a, b = args
        out = []
        for i in range(m):
            s = self.zero()
            for j, k in itertools.product(range(m), repeat=2):
                t = self.K3[i][j][k]
                if not t.is_zero() and not a[j].is_zero() and not b[k].is_zero():
                    s = s + t * a[j] * b[k]
            out.append(s)
        return out

    def min_degrees(self) -> dict:
        def md(xs):
            ds = [x.min_degree() for x in xs if not x.is_zero()]
            return min(ds) if ds else None
        flat2 = [x for r in self.K2 for x in r]
        flat3 = [x for r in self.K3 for s in r for x in s]
        return {1: md(self.K1), 2: md(flat2), 3: md(flat3)}


def generic_critical_point(action: CubicAction, D: Optional[int] = None):
    """Fixed-point iteration; returns (v_cr, Report certifying stationarity)."""
    D = action.D if D is None else D
    rep = Report("critical_point")
    c = [action.zero() for _ in range(action.m)]
    for _ in range(2 * D + 2):
        src = action.K1
        rhs = [src[i] + action.form(2, [c])[i] + action.form(3, [c, c])[i].scale(HALF)
               for i in range(action.m)]
        nxt = [x.truncate(D) for x in action.raise_index(rhs)]
        if nxt == c:
            break
        c = nxt
    grad = action.gradient(c)
    bad = next((i for i, g in enumerate(grad) if not g.truncate(D).is_zero()), None)
    rep.add("stationary", bad is None, degree=D,
            witness=None if bad is None else {"coordinate": bad, "partial": str(grad[bad])})
    return c, rep


def generic_critical_value(action: CubicAction, v_cr: Sequence[Series], D: Optional[int] = None):
    D = action.D if D is None else D
    rep = Report("critical_value")
    direct = action.value(v_cr).truncate(D)
    trees = unrooted_tree_sum(action, D)
    rep.add("value_equals_unrooted_tree_sum", direct == trees, degree=D,
            witness=None if direct == trees else {"direct": str(direct), "trees": str(trees)})
    return direct, rep


# ------------------------------------------------------------ tree sums
# A subtree code is (d, children) where d is the vertex degree and the
# d - 1 children are codes sorted ascending.

def _weights(action: CubicAction) -> dict:
    w = action.min_degrees()
    if w[1] is None:
        return w
    if w[1] < 1 or (w[2] is not None and w[2] < 1):
        raise InputError("tree sums need K1 and K2 of positive degree")
    return w


def rooted_subtrees(w: dict, maxw: int) -> dict:
    """weight -> list of subtree codes, for weights 1..maxw."""
    by = {k: [] for k in range(maxw + 1)}
    for k in range(1, maxw + 1):
        if w[1] == k:
            by[k].append((1, ()))
        if w[2] is not None and k - w[2] >= 1:
            by[k].extend((2, (c,)) for c in by[k - w[2]])
        if w[3] is not None:
            rest = k - w[3]
            for k1 in range(1, rest // 2 + 1):
                for a in by[k1]:
                    for b in by[rest - k1]:
                        if k1 < rest - k1 or a <= b:
                            by[k].append((3, tuple(sorted((a, b)))))
    return by


def _code_aut(code) -> int:
    _, ch = code
    out = 1
    for c in ch:
        out *= _code_aut(c)
    for c in set(ch):
        out *= _fact(ch.count(c))
    return out


def _fact(n):
    r = 1
    for k in range(2, n + 1):
        r *= k
    return r


class _TreeValues:
    def __init__(self, action):
        self.a = action
        self.memo = {}

    def covector(self, code):
        if code not in self.memo:
            d, ch = code
            self.memo[code] = self.a.form(d, [self.vector(c) for c in ch])
        return self.memo[code]

    def vector(self, code):
        return self.a.raise_index(self.covector(code))


def rooted_tree_sum(action: CubicAction, D: Optional[int] = None) -> list:
    """Oracle for v_cr: sum over rooted trees of b2 . (subtree covector) / |Aut|."""
    D = action.D if D is None else D
    w = _weights(action)
    if w[1] is None:
        return [action.zero() for _ in range(action.m)]
    tv = _TreeValues(action)
    tot = [action.zero() for _ in range(action.m)]
    for codes in rooted_subtrees(w, D).values():
        for code in codes:
            v = tv.vector(code)
            s = Fraction(1, _code_aut(code))
            tot = [t + x.scale(s) for t, x in zip(tot, v)]
    return [t.truncate(D) for t in tot]


def _to_adjacency(root_children):
    adj = {0: []}
    stack = [(0, c) for c in root_children]
    while stack:
        parent, (d, ch) = stack.pop()
        v = len(adj)
        adj[v] = [parent]
        adj[parent].append(v)
        stack.extend((v, c) for c in ch)
    return adj


def _code_at(adj, v, parent):
    ch = tuple(sorted(_code_at(adj, u, v) for u in adj[v] if u != parent))
    return (len(adj[v]), ch)


def unrooted_trees(w: dict, maxw: int) -> list:
    """(root children, |Aut|) for each unrooted tree of weight <= maxw, one root per class."""
    sub = rooted_subtrees(w, maxw)
    flat = [(k, c) for k, cs in sub.items() for c in cs]
    seen, out = set(), []
    for d in (1, 2, 3):
        if w[d] is None:
            continue
        for combo in itertools.combinations_with_replacement(sorted(flat, key=lambda x: x[1]), d):
            if w[d] + sum(k for k, _ in combo) > maxw:
                continue
            children = tuple(sorted(c for _, c in combo))
            adj = _to_adjacency(children)
            codes = [_code_at(adj, v, None) for v in adj]
            canon = min(codes)
            if canon in seen:
                continue
            seen.add(canon)
            mine = codes[0]
            orbit = sum(1 for c in codes if c == mine)
            out.append((children, _code_aut(mine), orbit))
    return [(ch, aut * orbit) for ch, aut, orbit in out]


def unrooted_tree_sum(action: CubicAction, D: Optional[int] = None) -> Series:
    """Oracle for A_cr: forms at vertices, b2 on edges, weight 1/|Aut|."""
    D = action.D if D is None else D
    w = _weights(action)
    if w[1] is None:
        return action.zero()
    tv = _TreeValues(action)
    tot = action.zero()
    for children, aut in unrooted_trees(w, D):
        d = len(children)
        vecs = [tv.vector(c) for c in children]
        if d == 1:
            val = action._dot(action.K1, vecs[0])
        else:
            val = action._dot(action.form(d, vecs[:-1]), vecs[-1])
        tot = tot + val.scale(Fraction(1, aut))
    return tot.truncate(D)


def random_action(m: int, D: int, seed: int = 0, n_vars: int = 2, scale: int = 3) -> CubicAction:
    """Random symmetric action on m coordinates with K1, K2 of positive degree."""
    rnd = random.Random(seed)
    vars = GradedVariables(tuple(f"s{i}" for i in range(n_vars)), (0,) * n_vars)

    def rs(lo, hi):
        terms = {}
        for _ in range(2):
            deg = rnd.randint(lo, hi)
            mono = [0] * n_vars
            for _ in range(deg):
                mono[rnd.randrange(n_vars)] += 1
            terms[tuple(mono)] = Fraction(rnd.randint(-scale, scale), rnd.randint(1, 2))
        return Series(vars, D, {k: v for k, v in terms.items() if v})

    K1 = tuple(rs(1, 2) for _ in range(m))
    K2 = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            K2[i][j] = K2[j][i] = rs(1, 2)
    K3 = [[[None] * m for _ in range(m)] for _ in range(m)]
    for i, j, k in itertools.combinations_with_replacement(range(m), 3):
        x = rs(0, 1)
        for p in set(itertools.permutations((i, j, k))):
            K3[p[0]][p[1]][p[2]] = x
    while True:
        B = [[Fraction(0)] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                B[i][j] = B[j][i] = Fraction(rnd.randint(-scale, scale))
        if mat_inverse(B) is not None:
            break
    return CubicAction(vars, D, K1, tuple(tuple(r) for r in K2),
                       tuple(tuple(tuple(r) for r in s) for s in K3), tuple(tuple(r) for r in B))


# ------------------------------------------------------------ BCOV

@dataclass(frozen=True)
class BCOVData:
    algebra: CHAlgebra
    action: CubicAction
    coords: tuple      # block generators e_a carried as coordinates
    sign: int          # B2 = sign * int Q e_a G- e_b
    constant: Series   # 1/6 int E^3

    def value(self, c: Sequence[Series]) -> Series:
        return self.constant + self.action.value(c)

    def g_vector(self, c: Sequence[Series]) -> SuperVector:
        """G-(v) for v = sum c_a e_a."""
        alg = self.algebra
        out = SuperVector.zero(alg.space, self.action.vars, self.action.D)
        for x, a in zip(c, self.coords):
            gi = alg.blocks[a][2]
            out = out + SuperVector.constant(alg.space, x.vars, x.D, {gi: ONE}).mul_series(x)
        return out


def _g_bivector_entries(alg: CHAlgebra, coords, b2) -> dict:
    out = {}
    for (i, a), (j, b) in itertools.product(enumerate(coords), repeat=2):
        if b2[i][j]:
            key = (alg.blocks[a][2], alg.blocks[b][2])
            out[key] = out.get(key, ZERO) + b2[i][j]
    return {k: v for k, v in out.items() if v}


def bcov_data(alg: CHAlgebra, D: int) -> BCOVData:
    if any(alg.parities[i] for i in alg.coords):
        raise InputError("BCOV route implemented for even H0 only")
    vars = alg.variables()
    par = alg.parities
    coords = tuple(k for k, blk in enumerate(alg.blocks) if par[blk[2]] == 0)
    E = alg.E(vars, D)
    E2 = alg.vmul(E, E)
    g = {a: SuperVector.constant(alg.space, vars, D, {alg.blocks[a][2]: ONE}) for a in coords}
    K1 = tuple(alg.vintegrate(alg.vmul(E2, g[a])).scale(HALF) for a in coords)
    K2 = tuple(tuple(alg.vintegrate(alg.vmul(alg.vmul(E, g[a]), g[b])) for b in coords) for a in coords)
    K3 = tuple(tuple(tuple(Series.const(vars, D, alg.integrate(alg.prod(alg.prod({alg.blocks[a][2]: ONE}, {alg.blocks[b][2]: ONE}), {alg.blocks[c][2]: ONE})))
                           for c in coords) for b in coords) for a in coords)
    raw = [[alg.pair_basis(alg.blocks[a][1], alg.blocks[b][2]) for b in coords] for a in coords]
    target = {k: v for k, v in operator_to_bivector(alg.K, alg.gram, alg.space).entries.items() if v}
    chosen = None
    for sign in (1, -1):
        B2 = tuple(tuple(sign * x for x in r) for r in raw)
        inv = mat_inverse([list(r) for r in B2]) if coords else []
        if inv is None:
            raise InputError("B2 degenerate on the block generators")
        if _g_bivector_entries(alg, coords, inv) == target:
            chosen = (sign, B2)
            break
    if chosen is None:
        chosen = (1, tuple(tuple(r) for r in raw))
    action = CubicAction(vars, D, K1, K2, K3, chosen[1])
    const = alg.vintegrate(alg.vmul(E2, E)).scale(SIXTH)
    return BCOVData(alg, action, coords, chosen[0], const)


def bcov_verify(alg: CHAlgebra, D: int) -> Report:
    rep = Report(f"bcov:{alg.name}")
    data = bcov_data(alg, D)
    act = data.action
    inv = [list(r) for r in act.b2]
    ents = _g_bivector_entries(alg, data.coords, inv)
    target = {k: v for k, v in operator_to_bivector(alg.K, alg.gram, alg.space).entries.items() if v}
    rep.add("Gminus_both_slots_of_b2_is_bivector_GmGp", ents == target,
            detail={"sign_of_B2": data.sign})
    c, crep = generic_critical_point(act, D)
    rep.extend(crep)
    gamma = compute_gamma(alg, D)
    E = alg.E(alg.variables(), D)
    g1 = E + data.g_vector(c)
    rep.add("E_plus_Gminus_vcr_equals_gamma", g1 == gamma, degree=D,
            residual_leading_monomial=None if g1 == gamma else str((g1 - gamma).leading_monomial()))
    F0 = compute_potential(alg, 0, D)
    val = data.value(c).truncate(D)
    rep.add("critical_value_equals_F0", val == F0, degree=D,
            witness=None if val == F0 else {"A_cr": str(val), "F0": str(F0)})
    if act.m:
        trees = rooted_tree_sum(act, D)
        rep.add("vcr_equals_rooted_tree_sum", trees == c, degree=D)
        _, vrep = generic_critical_value(act, c, D)
        rep.extend(vrep)
    return rep
