"""Exact graded linear algebra over truncated power series.

Everything here is immutable and exact.  Scalars are ``fractions.Fraction``.
A ``Series`` is a truncated power series in graded variables T_1..T_n, keyed
by exponent tuples in the fixed variable order.  Vectors and operators carry
series coefficients, stored as maps from monomials to constant sparse data,
so that ``T^m v_m`` is the basic term and Koszul signs are applied whenever an
odd monomial moves past an odd constant.

Sign conventions used throughout the package:

* ``(T^m A)(T^n v) = (-1)^{|A||n|} T^m T^n A(v)`` where ``|A|`` is the parity
  of the constant operator ``A``.
* ``(T^m a)(T^n b) = (-1)^{|a||n|} T^m T^n (a b)`` for products in H.
* ``[A]`` has coefficient matrix ``B = A g^{-1}`` where ``g_ij = (e_i, e_j)``,
  so that ``sum_b B[a][b] (e_b, w) = (A w)_a``.  Closing a bivector on a
  two-slot form uses the Koszul sign of pulling the second slot in front:
  ``<[A], w> = sum B[a][b] (-1)^{p_a p_b} w(e_a, e_b)``.  With this rule
  ``<[J A], int(* * h)> = str(A o h.)`` for even ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _iproduct
from typing import Callable, Iterable, Mapping, Sequence

Scalar = Fraction
Monomial = tuple
SparseVec = dict  # int -> Fraction
SparseMat = dict  # column j -> {row i -> Fraction}

ZERO = Fraction(0)
ONE = Fraction(1)


class InputError(ValueError):
    """Malformed input to a core operation."""


def to_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise InputError("floating point values are not accepted")
    return Fraction(x)


# ---------------------------------------------------------------- signs

def koszul_sign(permutation: Sequence[int], parities: Sequence[int]) -> int:
    """Sign of reordering graded slots.

    ``permutation[k]`` is the original slot that ends up at position k and
    ``parities[s]`` is the parity of original slot s.  Every inversion of two
    odd slots contributes a factor -1.
    """
    perm = list(permutation)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise InputError(f"not a permutation of 0..{n - 1}: {perm}")
    if len(parities) != n:
        raise InputError("parities length does not match permutation")
    sign = 1
    for a in range(n):
        if not parities[perm[a]] & 1:
            continue
        for b in range(a + 1, n):
            if parities[perm[b]] & 1 and perm[a] > perm[b]:
                sign = -sign
    return sign


# ------------------------------------------------------------ variables

@dataclass(frozen=True)
class GradedVariables:
    names: tuple
    parities: tuple

    def __post_init__(self):
        if len(self.names) != len(self.parities):
            raise InputError("names and parities differ in length")
        if any(p not in (0, 1) for p in self.parities):
            raise InputError("parities must be 0 or 1")

    @property
    def n(self) -> int:
        return len(self.names)

    def zero_monomial(self) -> Monomial:
        return (0,) * self.n

    def unit(self, i: int) -> Monomial:
        m = [0] * self.n
        m[i] = 1
        return tuple(m)

    def degree(self, m: Monomial) -> int:
        return sum(m)

    def parity(self, m: Monomial) -> int:
        return sum(e for e, p in zip(m, self.parities) if p) & 1

    def mul(self, m1: Monomial, m2: Monomial):
        """Return (sign, m1*m2) or None when an odd variable squares to zero."""
        sign = 1
        odd_after = 0  # odd variables of m1 with index greater than current
        par = self.parities
        # count pairs (i in m1 odd, j in m2 odd, i > j)
        for j in range(self.n - 1, -1, -1):
            if par[j]:
                if m1[j] and m2[j]:
                    return None
                if m2[j] and odd_after & 1:
                    sign = -sign
                if m1[j]:
                    odd_after += 1
        return sign, tuple(a + b for a, b in zip(m1, m2))

    def format(self, m: Monomial) -> str:
        parts = []
        for e, name in zip(m, self.names):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


def _check_vars(a, b):
    if a.vars != b.vars:
        raise InputError("graded variable sets differ")


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# --------------------------------------------------------------- series

@dataclass(frozen=True)
class Series:
    vars: GradedVariables
    D: int
    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {m: to_scalar(c) for m, c in self.terms.items()
                 if c != 0 and sum(m) <= self.D}
        object.__setattr__(self, "terms", clean)

    # constructors
    @classmethod
    def zero(cls, vars: GradedVariables, D: int) -> "Series":
        return cls(vars, D, {})

    @classmethod
    def const(cls, vars: GradedVariables, D: int, c) -> "Series":
        return cls(vars, D, {vars.zero_monomial(): to_scalar(c)})

    @classmethod
    def variable(cls, vars: GradedVariables, D: int, i: int) -> "Series":
        return cls(vars, D, {vars.unit(i): ONE})

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.const(self.vars, self.D, other)
        _check_vars(self, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return Series(self.vars, min(self.D, other.D), out)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.vars, self.D, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series":
        c = to_scalar(c)
        return Series(self.vars, self.D, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Series):
            return series_mul(self, other, min(self.D, other.D))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.vars == other.vars and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, D: int) -> "Series":
        return Series(self.vars, min(D, self.D), self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), ZERO)

    def homogeneous(self, k: int) -> "Series":
        return Series(self.vars, self.D, {m: c for m, c in self.terms.items() if sum(m) == k})

    def min_degree(self):
        return min((sum(m) for m in self.terms), default=None)

    def leading_monomial(self):
        """Lowest-degree monomial, ties broken by canonical order."""
        if not self.terms:
            return None
        return min(self.terms, key=lambda m: (sum(m), tuple(-e for e in m)))

    def derivative(self, i: int) -> "Series":
        """Left derivative with respect to T_i."""
        out = {}
        par = self.vars.parities
        for m, c in self.terms.items():
            e = m[i]
            if not e:
                continue
            sign = 1
            if par[i] and sum(m[k] for k in range(i) if par[k]) & 1:
                sign = -1
            mm = list(m)
            mm[i] -= 1
            out[tuple(mm)] = out.get(tuple(mm), ZERO) + sign * e * c
        return Series(self.vars, max(self.D - 1, 0), out)

    def derivatives(self, idx: Iterable[int]) -> "Series":
        s = self
        for i in reversed(list(idx)):
            s = s.derivative(i)
        return s

    def restrict(self, keep: Callable[[Monomial], bool]) -> "Series":
        return Series(self.vars, self.D, {m: c for m, c in self.terms.items() if keep(m)})

    def to_json(self) -> dict:
        return {self.vars.format(m): _frac_str(c)
                for m, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))}

    def __repr__(self):
        if not self.terms:
            return f"Series(0, D={self.D})"
        body = " + ".join(f"{_frac_str(c)}*{k}" for k, c in
                          ((self.vars.format(m), c) for m, c in
                           sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))))
        return f"Series({body}, D={self.D})"


def series_mul(a: Series, b: Series, D: int) -> Series:
    _check_vars(a, b)
    vars = a.vars
    out = {}
    for m1, c1 in a.terms.items():
        d1 = sum(m1)
        for m2, c2 in b.terms.items():
            if d1 + sum(m2) > D:
                continue
            r = vars.mul(m1, m2)
            if r is None:
                continue
            s, m = r
            out[m] = out.get(m, ZERO) + s * c1 * c2
    return Series(vars, D, out)


# ---------------------------------------------------------------- space

@dataclass(frozen=True)
class SuperSpace:
    parities: tuple
    labels: tuple = ()

    def __post_init__(self):
        if len(self.parities) < 1:
            raise InputError("dimension must be at least 1")
        if any(p not in (0, 1) for p in self.parities):
            raise InputError("parities must be 0 or 1")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(len(self.parities))))
        if len(self.labels) != len(self.parities):
            raise InputError("labels and parities differ in length")

    @property
    def dim(self) -> int:
        return len(self.parities)

    def sdim(self) -> int:
        return sum(1 - 2 * p for p in self.parities)


# ------------------------------------------------- constant sparse helpers

def vec_add(u: SparseVec, v: SparseVec, c=ONE) -> SparseVec:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, ZERO) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def mat_apply(A: SparseMat, v: SparseVec) -> SparseVec:
    out = {}
    for j, x in v.items():
        col = A.get(j)
        if col:
            for i, a in col.items():
                out[i] = out.get(i, ZERO) + a * x
    return {k: x for k, x in out.items() if x}


def mat_mul(A: SparseMat, B: SparseMat) -> SparseMat:
    out = {}
    for j, col in B.items():
        c = mat_apply(A, col)
        if c:
            out[j] = c
    return out


def mat_add(A: SparseMat, B: SparseMat, c=ONE) -> SparseMat:
    out = {j: dict(col) for j, col in A.items()}
    for j, col in B.items():
        r = vec_add(out.get(j, {}), col, c)
        if r:
            out[j] = r
        else:
            out.pop(j, None)
    return out


def mat_scale(A: SparseMat, c) -> SparseMat:
    c = to_scalar(c)
    if not c:
        return {}
    return {j: {i: c * a for i, a in col.items()} for j, col in A.items()}


def mat_identity(n: int) -> SparseMat:
    return {i: {i: ONE} for i in range(n)}


def mat_from_dense(rows: Sequence[Sequence]) -> SparseMat:
    out = {}
    for i, row in enumerate(rows):
        for j, a in enumerate(row):
            a = to_scalar(a)
            if a:
                out.setdefault(j, {})[i] = a
    return out


def mat_to_dense(A: SparseMat, n: int) -> list:
    rows = [[ZERO] * n for _ in range(n)]
    for j, col in A.items():
        for i, a in col.items():
            rows[i][j] = a
    return rows


def mat_trace(A: SparseMat) -> Fraction:
    return sum((col.get(j, ZERO) for j, col in A.items()), ZERO)


def mat_parity(A: SparseMat, parities: Sequence[int]):
    """0, 1, or None when A mixes parities (zero matrix reports 0)."""
    seen = {(parities[i] + parities[j]) & 1 for j, col in A.items() for i in col}
    if len(seen) > 1:
        return None
    return seen.pop() if seen else 0


def mat_inverse(rows: Sequence[Sequence[Fraction]]):
    """Exact Gauss-Jordan inverse of a dense matrix, or None if singular."""
    n = len(rows)
    a = [[to_scalar(x) for x in r] + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(rows)
    a = [[to_scalar(x) for x in r] for r in rows]
    det = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


# ---------------------------------------------------------- super vector

@dataclass(frozen=True)
class SuperVector:
    """sum_m T^m v_m with constant sparse vectors v_m."""

    space: SuperSpace
    vars: GradedVariables
    D: int
    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, v in self.terms.items():
            if sum(m) > self.D:
                continue
            v = {k: to_scalar(x) for k, x in v.items() if x}
            if v:
                clean[m] = v
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, space, vars, D):
        return cls(space, vars, D, {})

    @classmethod
    def constant(cls, space, vars, D, v: Mapping):
        return cls(space, vars, D, {vars.zero_monomial(): dict(v)})

    @classmethod
    def basis(cls, space, vars, D, i: int):
        return cls.constant(space, vars, D, {i: ONE})

    def __add__(self, other: "SuperVector"):
        _check_vars(self, other)
        out = {m: dict(v) for m, v in self.terms.items()}
        for m, v in other.terms.items():
            out[m] = vec_add(out.get(m, {}), v)
        return SuperVector(self.space, self.vars, min(self.D, other.D), out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SuperVector":
        c = to_scalar(c)
        return SuperVector(self.space, self.vars, self.D,
                           {m: {k: c * x for k, x in v.items()} for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, SuperVector):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted((m, tuple(sorted(v.items()))) for m, v in self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, D: int) -> "SuperVector":
        return SuperVector(self.space, self.vars, min(D, self.D), self.terms)

    def homogeneous(self, k: int) -> "SuperVector":
        return SuperVector(self.space, self.vars, self.D,
                           {m: v for m, v in self.terms.items() if sum(m) == k})

    def component(self, i: int) -> Series:
        return Series(self.vars, self.D, {m: v[i] for m, v in self.terms.items() if i in v})

    def mul_series(self, s: Series) -> "SuperVector":
        """Right multiplication v*s, i.e. T^m v_m T^n s_n."""
        out = {}
        for m, v in self.terms.items():
            for n, c in s.terms.items():
                if sum(m) + sum(n) > min(self.D, s.D):
                    continue
                r = self.vars.mul(m, n)
                if r is None:
                    continue
                sg, mm = r
                pn = self.vars.parity(n)
                for k, x in v.items():
                    sk = -1 if (self.space.parities[k] & pn) else 1
                    out.setdefault(mm, {})
                    out[mm][k] = out[mm].get(k, ZERO) + sg * sk * c * x
        return SuperVector(self.space, self.vars, min(self.D, s.D), out)

    def parity_of(self):
        """'even', 'odd', 'mixed' or 'zero' for the total parity."""
        seen = set()
        for m, v in self.terms.items():
            pm = self.vars.parity(m)
            for k in v:
                seen.add((pm + self.space.parities[k]) & 1)
        if not seen:
            return "zero"
        if len(seen) > 1:
            return "mixed"
        return "odd" if seen.pop() else "even"

    def leading_monomial(self):
        if not self.terms:
            return None
        return min(self.terms, key=lambda m: (sum(m), tuple(-e for e in m)))

    def to_json(self) -> dict:
        out = {}
        for m in sorted(self.terms, key=lambda m: (sum(m), tuple(-e for e in m))):
            v = self.terms[m]
            out[self.vars.format(m)] = {self.space.labels[k]: _frac_str(v[k]) for k in sorted(v)}
        return out


# --------------------------------------------------------- super operator

@dataclass(frozen=True)
class SuperOperator:
    """sum_m T^m A_m with constant sparse matrices A_m (column action)."""

    space: SuperSpace
    vars: GradedVariables
    D: int
    parity: int
    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, A in self.terms.items():
            if sum(m) > self.D:
                continue
            A = {j: {i: to_scalar(a) for i, a in col.items() if a} for j, col in A.items()}
            A = {j: col for j, col in A.items() if col}
            if A:
                clean[m] = A
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, space, vars, D, A: SparseMat, parity: int):
        return cls(space, vars, D, parity, {vars.zero_monomial(): A})

    @classmethod
    def identity(cls, space, vars, D):
        return cls.constant(space, vars, D, mat_identity(space.dim), 0)

    @classmethod
    def zero(cls, space, vars, D, parity=0):
        return cls(space, vars, D, parity, {})

    def _cpar(self, m) -> int:
        return (self.parity + self.vars.parity(m)) & 1

    def __add__(self, other: "SuperOperator"):
        _check_vars(self, other)
        out = {m: A for m, A in self.terms.items()}
        for m, A in other.terms.items():
            out[m] = mat_add(out.get(m, {}), A)
        return SuperOperator(self.space, self.vars, min(self.D, other.D), self.parity, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return SuperOperator(self.space, self.vars, self.D, self.parity,
                             {m: mat_scale(A, c) for m, A in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, SuperOperator):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return id(self)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, D):
        return SuperOperator(self.space, self.vars, min(D, self.D), self.parity, self.terms)

    def homogeneous(self, k: int) -> "SuperOperator":
        return SuperOperator(self.space, self.vars, self.D, self.parity,
                             {m: A for m, A in self.terms.items() if sum(m) == k})

    def degree_part(self, k: int) -> SparseMat:
        """Sum of the constant matrices of total degree k (only meaningful at k = 0)."""
        out = {}
        for m, A in self.terms.items():
            if sum(m) == k:
                out = mat_add(out, A)
        return out

    def apply(self, v: SuperVector) -> SuperVector:
        D = min(self.D, v.D)
        vars = self.vars
        out = {}
        for m, A in self.terms.items():
            pa = self._cpar(m)
            dm = sum(m)
            for n, x in v.terms.items():
                if dm + sum(n) > D:
                    continue
                r = vars.mul(m, n)
                if r is None:
                    continue
                sg, mm = r
                if pa & vars.parity(n):
                    sg = -sg
                y = mat_apply(A, x)
                if y:
                    out[mm] = vec_add(out.get(mm, {}), y, sg)
        return SuperVector(self.space, vars, D, out)

    def __call__(self, v: SuperVector) -> SuperVector:
        return self.apply(v)

    def compose(self, other: "SuperOperator") -> "SuperOperator":
        """self o other."""
        D = min(self.D, other.D)
        vars = self.vars
        out = {}
        for m, A in self.terms.items():
            pa = self._cpar(m)
            dm = sum(m)
            for n, B in other.terms.items():
                if dm + sum(n) > D:
                    continue
                r = vars.mul(m, n)
                if r is None:
                    continue
                sg, mm = r
                if pa & vars.parity(n):
                    sg = -sg
                C = mat_mul(A, B)
                if C:
                    out[mm] = mat_add(out.get(mm, {}), C, sg)
        return SuperOperator(self.space, vars, D, (self.parity + other.parity) & 1, out)

    def __matmul__(self, other):
        return self.compose(other)

    def leading_monomial(self):
        if not self.terms:
            return None
        return min(self.terms, key=lambda m: (sum(m), tuple(-e for e in m)))


def supertrace(A: SuperOperator) -> Series:
    par = A.space.parities
    out = {}
    for m, M in A.terms.items():
        t = sum((col.get(j, ZERO) * (-1 if par[j] else 1) for j, col in M.items()), ZERO)
        if t:
            out[m] = t
    return Series(A.vars, A.D, out)


def constant_supertrace(A: SparseMat, parities: Sequence[int]) -> Fraction:
    return sum((col.get(j, ZERO) * (-1 if parities[j] else 1) for j, col in A.items()), ZERO)


def parity_operator(space: SuperSpace) -> SparseMat:
    return {i: {i: Fraction(-1) if p else ONE} for i, p in enumerate(space.parities)}


# -------------------------------------------------------------- bivector

@dataclass(frozen=True)
class Bivector:
    """sum_{a,b} B[a][b] e_a (x) e_b, with Series entries."""

    space: SuperSpace
    entries: Mapping  # (a, b) -> Series or Fraction

    def __post_init__(self):
        object.__setattr__(self, "entries", {k: v for k, v in self.entries.items() if v != 0})

    def is_zero(self) -> bool:
        return not self.entries

    def support(self) -> set:
        return {i for ab in self.entries for i in ab}

    def contract(self, form: Callable[[int, int], object]):
        """<[A], w> with the Koszul sign of pulling the second slot first."""
        par = self.space.parities
        total = None
        for (a, b), c in sorted(self.entries.items()):
            val = form(a, b)
            term = c * val
            if par[a] & par[b]:
                term = -term
            total = term if total is None else total + term
        return ZERO if total is None else total


def gram_inverse(gram: Sequence[Sequence[Fraction]]):
    inv = mat_inverse(gram)
    if inv is None:
        raise InputError("scalar product is degenerate")
    return inv


def operator_to_bivector(A: SparseMat, gram: Sequence[Sequence[Fraction]], space: SuperSpace) -> Bivector:
    """[A] = A g^{-1}: contracting slot two against w gives A w."""
    ginv = gram_inverse(gram)
    n = space.dim
    dense = mat_to_dense(A, n)
    entries = {}
    for a in range(n):
        for b in range(n):
            s = sum((dense[a][c] * ginv[c][b] for c in range(n)), ZERO)
            if s:
                entries[(a, b)] = s
    return Bivector(space, entries)


def bivector_pairing(biv: Bivector, w: int, gram) -> dict:
    """Coefficients of sum_{a,b} B[a][b] e_a (e_b, e_w), as a sparse vector."""
    out = {}
    for (a, b), c in biv.entries.items():
        g = gram[b][w]
        if g:
            out[a] = out.get(a, ZERO) + c * g
    return {k: x for k, x in out.items() if x}


def all_monomials(vars: GradedVariables, D: int):
    """All normal-ordered monomials of degree <= D, in canonical order."""
    res = []

    def rec(i, left, acc):
        if i == vars.n:
            res.append(tuple(acc))
            return
        top = min(left, 1) if vars.parities[i] else left
        for e in range(top + 1):
            acc.append(e)
            rec(i + 1, left - e, acc)
            acc.pop()

    rec(0, D, [])
    return sorted(res, key=lambda m: (sum(m), tuple(-e for e in m)))
