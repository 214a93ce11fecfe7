"""Staged search for small cH algebras.

Q, G-, the blocks and the integral are fixed by the profile; the structure
constants are unknowns restricted by parity and by an auxiliary integer
weight (products add weights).  The polynomial axiom system is solved with
sympy, free parameters of each solution family are set to small rationals,
and every candidate is certified by ``validate_algebra``.  Nothing returned
here is trusted without that certificate.
"""

from __future__ import annotations

import itertools
import signal
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import CHAlgebra, from_tables, validate_algebra
from .core import InputError
from .report import Report


@dataclass(frozen=True)
class FixtureProfile:
    """Shape of the algebra to look for.

    ``weights`` is an auxiliary grading: e_i e_j may only have components of
    weight w_i + w_j.  ``fixed`` pins structure constants, given as
    (left, right, target) -> value, usually to break scaling symmetry.
    """
    labels: tuple
    parities: tuple
    weights: tuple
    h0: tuple
    blocks: tuple
    integral: tuple = ("L",)
    fixed: dict = field(default_factory=dict)
    require_trees: bool = False  # ask for H0 . H0 meeting the block part
    name: str = "searched"

    def __post_init__(self):
        n = len(self.labels)
        if not (len(self.parities) == len(self.weights) == n):
            raise InputError("profile arrays disagree in length")
        if n > 12:
            raise InputError("profile dimension must be at most 12")
        if self.labels[0] != "1":
            raise InputError("the first basis vector must be the unit '1'")


@contextmanager
def _time_limit(seconds):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def handler(signum, frame):
        raise TimeoutError

    old = signal.signal(signal.SIGALRM, handler)
    signal.alarm(int(seconds))
    try:
        yield
    finally:
        signal.alarm(0)
        signal.signal(signal.SIGALRM, old)


def axiom_system(profile: FixtureProfile, one_twelfth: bool):
    """(equations, unknowns, product table with sympy entries)."""
    import sympy as sp

    names, par, wt = profile.labels, profile.parities, profile.weights
    N = len(names)
    idx = {n: i for i, n in enumerate(names)}
    Q, G = {}, {}
    for e, f, g, h in profile.blocks:
        e, f, g, h = idx[e], idx[f], idx[g], idx[h]
        Q[e] = {f: 1}
        Q[g] = {h: 1}
        G[e] = {g: 1}
        G[f] = {h: -1}
    syms, P = [], {}
    for i in range(1, N):
        for j in range(i, N):
            if i == j and par[i]:
                continue
            p, w = (par[i] + par[j]) % 2, wt[i] + wt[j]
            vec = {}
            for k in range(N):
                if par[k] == p and wt[k] == w:
                    s = sp.Symbol(f"c_{names[i]}_{names[j]}_{names[k]}")
                    syms.append(s)
                    vec[k] = s
            P[(i, j)] = vec
    for (a, b, c), val in profile.fixed.items():
        i, j = sorted((idx[a], idx[b]))
        if idx[c] not in P.get((i, j), {}):
            raise InputError(f"fixed constant {a}*{b}->{c} is excluded by parity or weight")
        syms.remove(P[(i, j)][idx[c]])
        P[(i, j)][idx[c]] = sp.Rational(str(Fraction(val)))

    def bm(i, j):
        if i == 0:
            return {j: 1}
        if j == 0:
            return {i: 1}
        if i <= j:
            return P.get((i, j), {})
        s = (-1) ** (par[i] * par[j])
        return {k: s * v for k, v in P.get((j, i), {}).items()}

    def add(a, b, c=1):
        r = dict(a)
        for k, v in b.items():
            r[k] = r.get(k, 0) + c * v
        return r

    def mul(a, b):
        r = {}
        for i, x in a.items():
            for j, y in b.items():
                for k, z in bm(i, j).items():
                    r[k] = r.get(k, 0) + x * y * z
        return r

    def op(M, a):
        r = {}
        for i, x in a.items():
            for k, z in M.get(i, {}).items():
                r[k] = r.get(k, 0) + x * z
        return r

    E = [{i: 1} for i in range(N)]
    eqs = set()

    def push(d):
        for v in d.values():
            v = sp.expand(v)
            if v != 0:
                eqs.add(v)

    for i, j, k in itertools.product(range(1, N), repeat=3):
        push(add(mul(mul(E[i], E[j]), E[k]), mul(E[i], mul(E[j], E[k])), -1))
    for i, j in itertools.product(range(N), repeat=2):
        d = add(op(Q, mul(E[i], E[j])), mul(op(Q, E[i]), E[j]), -1)
        push(add(d, mul(E[i], op(Q, E[j])), -(-1) ** par[i]))
    for a, b, c in itertools.product(range(1, N), repeat=3):
        pa, pb = par[a], par[b]
        A, B, C = E[a], E[b], E[c]
        d = op(G, mul(mul(A, B), C))
        for coef, t in [(-1, mul(op(G, mul(A, B)), C)),
                        (-(-1) ** (pb * (pa + 1)), mul(B, op(G, mul(A, C)))),
                        (-(-1) ** pa, mul(A, op(G, mul(B, C)))),
                        (1, mul(mul(op(G, A), B), C)),
                        ((-1) ** pa, mul(mul(A, op(G, B)), C)),
                        ((-1) ** (pa + pb), mul(mul(A, B), op(G, C)))]:
            d = add(d, t, coef)
        push(d)
    integ_w = [1 if n in profile.integral else 0 for n in names]

    def integ(v):
        return sum(integ_w[k] * x for k, x in v.items())

    for a, b in itertools.product(range(N), repeat=2):
        push({0: integ(mul(op(Q, E[a]), E[b])) - (-1) ** (par[a] + 1) * integ(mul(E[a], op(Q, E[b])))})
        push({0: integ(mul(op(G, E[a]), E[b])) - (-1) ** par[a] * integ(mul(E[a], op(G, E[b])))})
    if one_twelfth:
        def str_l(pre, vec):
            s = 0
            for k in range(N):
                v = mul(vec, E[k])
                v = op(G, v) if pre else v
                s += (-1) ** par[k] * v.get(k, 0)
            return sp.expand(s)
        for k in range(N):
            push({0: str_l(True, E[k]) - str_l(False, op(G, E[k])) / 12})
    return sorted(eqs, key=str), syms, P


def _to_algebra(profile: FixtureProfile, P, subs, name) -> Optional[CHAlgebra]:
    names = profile.labels
    prods = {(names[0], l): {l: 1} for l in names}
    for (i, j), vec in P.items():
        out = {}
        for k, v in vec.items():
            x = v.subs(subs) if hasattr(v, "subs") else v
            if not x.is_number or x.has(float("inf")) or x.is_finite is False:
                return None
            x = Fraction(str(x))
            if x:
                out[names[k]] = x
        if out:
            prods[(names[i], names[j])] = out
    Q = {e: {f: 1} for e, f, g, h in profile.blocks}
    Q.update({g: {h: 1} for e, f, g, h in profile.blocks})
    Gm = {e: {g: 1} for e, f, g, h in profile.blocks}
    Gm.update({f: {h: -1} for e, f, g, h in profile.blocks})
    integral = {l: 1 for l in profile.integral}
    try:
        return from_tables(list(names), list(profile.parities), prods, Q, Gm,
                           [names[i] for i in profile.h0] if profile.h0 and isinstance(profile.h0[0], int) else list(profile.h0),
                           list(profile.blocks), integral, name)
    except InputError:
        return None


def has_tree_terms(alg: CHAlgebra) -> bool:
    """Some product of two H0 vectors has a component outside H0."""
    h0 = set(alg.h0)
    return any(k not in h0 for i in alg.h0 for j in alg.h0 for k in alg.prod({i: 1}, {j: 1}))


@dataclass
class SearchResult:
    algebra: Optional[CHAlgebra]
    report: Report
    families: int = 0
    candidates: int = 0
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.algebra is not None


def search_fixture(profile: FixtureProfile, require_one_twelfth: bool = False,
                   budget: int = 2000, per_family: int = 150, time_budget: Optional[float] = 300,
                   values=(1, -1, 2, -2, Fraction(1, 2))) -> SearchResult:
    """Solve the axioms, then certify specializations.  Not finding one is a result."""
    import sympy as sp

    eqs, syms, P = axiom_system(profile, require_one_twelfth)
    if not syms:
        sols = [{}] if not eqs else []
    else:
        try:
            with _time_limit(time_budget):
                sols = sp.solve(eqs, syms, dict=True)
        except TimeoutError:
            return SearchResult(None, Report(f"search:{profile.name}"), reason="solver time budget exhausted")
    tried = 0
    for sol in sols:
        free = sorted({s for v in sol.values() for s in sp.sympify(v).free_symbols} |
                      {s for s in syms if s not in sol}, key=str)
        for n, choice in enumerate(itertools.product(values, repeat=len(free))):
            if n >= per_family:
                break
            if tried >= budget:
                return SearchResult(None, Report(f"search:{profile.name}"), len(sols), tried,
                                    "candidate budget exhausted")
            tried += 1
            sub = {s: sp.Rational(str(Fraction(c))) for s, c in zip(free, choice)}
            full = {s: sp.sympify(sol.get(s, s)).subs(sub) for s in syms}
            alg = _to_algebra(profile, P, full, profile.name)
            if alg is None:
                continue
            rep = validate_algebra(alg, check_one_twelfth=require_one_twelfth)
            if not rep.passed:
                continue
            if profile.require_trees and not has_tree_terms(alg):
                continue
            return SearchResult(alg, rep, len(sols), tried)
    return SearchResult(None, Report(f"search:{profile.name}"), len(sols), tried, "no certified candidate")


# Profiles used to produce the shipped fixtures.
PROFILES = {
    "frobenius2": FixtureProfile(("1", "L"), (0, 0), (0, 2), (0, 1), (), name="frobenius2"),
    "block6": FixtureProfile(("1", "L", "e", "f", "g", "h"), (0, 0, 1, 0, 0, 1), (0, 2, 1, 2, 0, 1),
                             (0, 1), (("e", "f", "g", "h"),), fixed={("e", "h", "L"): 1}, name="block6"),
    "block7": FixtureProfile(("1", "x", "L", "e", "f", "g", "h"), (0, 0, 0, 1, 0, 0, 1), (0, 1, 2, 1, 2, 0, 1),
                             (0, 1, 2), (("e", "f", "g", "h"),), fixed={("x", "x", "L"): 1},
                             require_trees=True, name="block7"),
    "block8": FixtureProfile(("1", "x", "y", "L", "e", "f", "g", "h"), (0, 0, 0, 0, 1, 0, 0, 1),
                             (0, 1, 1, 2, 1, 2, 0, 1), (0, 1, 2, 3), (("e", "f", "g", "h"),),
                             fixed={("x", "y", "L"): 1}, require_trees=True, name="block8"),
}
