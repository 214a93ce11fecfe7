"""Trivalent graphs with labeled leaves: enumeration, canonical form, |Aut|.

A graph has internal vertices ``0..V-1``, internal edges ``(u, v, marking)``
with ``u <= v`` (self-loops allowed, parallel edges allowed) and leaves
``(v, label)``.  Canonical forms come from individualization-refinement;
the number of search leaves reaching the minimal code is the number of vertex
permutations preserving the graph.  The full automorphism order multiplies in
permutations of parallel edges, loop flips, and equal-label leaves sharing a
vertex.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, Optional, Sequence

from .core import InputError

BLACK = "Black"
MARKINGS = ("Black", "JBlack", "White", "GMinus", "Identity", "JIdentity", "Oc", "O0")


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: tuple = ()
    leaves: tuple = ()

    def __post_init__(self):
        edges = tuple(sorted((min(u, v), max(u, v), str(m)) for u, v, *mm in self.edges
                             for m in [mm[0] if mm else BLACK]))
        leaves = tuple(sorted((v, str(l)) for v, l in self.leaves))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "leaves", leaves)
        for u, v, _ in edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise InputError(f"edge ({u},{v}) out of range")
        for v, _ in leaves:
            if not 0 <= v < self.n_vertices:
                raise InputError(f"leaf at vertex {v} out of range")

    # ----- structure
    def degree(self, v: int) -> int:
        d = sum(1 for w, _ in self.leaves if w == v)
        for a, b, _ in self.edges:
            d += (a == v) + (b == v)
        return d

    def degrees(self) -> list:
        return [self.degree(v) for v in range(self.n_vertices)]

    @property
    def genus(self) -> int:
        return len(self.edges) - self.n_vertices + 1

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return False
        seen = {0}
        stack = [0]
        adj = self.adjacency()
        while stack:
            v = stack.pop()
            for w, _, _ in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n_vertices

    def is_trivalent(self) -> bool:
        return all(d == 3 for d in self.degrees())

    def adjacency(self) -> list:
        """adj[v] = list of (neighbour, marking, edge index); loops appear once."""
        adj = [[] for _ in range(self.n_vertices)]
        for k, (u, v, m) in enumerate(self.edges):
            adj[u].append((v, m, k))
            if u != v:
                adj[v].append((u, m, k))
        return adj

    def leaf_labels(self) -> list:
        return [l for _, l in self.leaves]

    def with_markings(self, markings: Sequence[str]) -> "Graph":
        if len(markings) != len(self.edges):
            raise InputError("one marking per edge required")
        return Graph(self.n_vertices, tuple((u, v, m) for (u, v, _), m in zip(self.edges, markings)), self.leaves)

    def relabel_leaves(self, mapping) -> "Graph":
        return Graph(self.n_vertices, self.edges, tuple((v, mapping.get(l, l)) for v, l in self.leaves))

    def permuted(self, perm: Sequence[int]) -> "Graph":
        """Rename vertex v to perm[v]."""
        return Graph(self.n_vertices, tuple((perm[u], perm[v], m) for u, v, m in self.edges),
                     tuple((perm[v], l) for v, l in self.leaves))

    def to_json(self) -> dict:
        return {"vertices": self.n_vertices,
                "edges": [[u, v] for u, v, _ in self.edges],
                "markings": [m for _, _, m in self.edges],
                "leaves": [[v, l] for v, l in self.leaves]}


# ------------------------------------------------------- canonical form

def _base_invariants(g: Graph) -> list:
    inv = []
    for v in range(g.n_vertices):
        labels = tuple(sorted(l for w, l in g.leaves if w == v))
        loops = tuple(sorted(m for a, b, m in g.edges if a == b == v))
        inv.append((g.degree(v), labels, loops))
    return inv


def _refine(cells: list, adj: list) -> list:
    """Equitable refinement of an ordered partition."""
    while True:
        where = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                where[v] = ci
        new = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            sig = {}
            for v in cell:
                s = tuple(sorted(Counter((where[w], m) for w, m, _ in adj[v] if w != v).items()))
                sig.setdefault(s, []).append(v)
            if len(sig) > 1:
                changed = True
                for s in sorted(sig):
                    new.append(sig[s])
            else:
                new.append(cell)
        cells = new
        if not changed:
            return cells


def _code(g: Graph, order: Sequence[int], base: list):
    pos = {v: i for i, v in enumerate(order)}
    verts = tuple(base[v] for v in order)
    edges = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v]), m) for u, v, m in g.edges))
    return verts, edges


def _search(g: Graph):
    """Return (min code, a minimizing order, number of orders reaching it)."""
    adj = g.adjacency()
    base = _base_invariants(g)
    groups = {}
    for v in range(g.n_vertices):
        groups.setdefault(base[v], []).append(v)
    cells = _refine([groups[k] for k in sorted(groups)], adj)
    best = [None, None, 0]

    def rec(cells):
        idx = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if idx is None:
            order = [c[0] for c in cells]
            code = _code(g, order, base)
            if best[0] is None or code < best[0]:
                best[0], best[1], best[2] = code, order, 1
            elif code == best[0]:
                best[2] += 1
            return
        cell = cells[idx]
        for v in cell:
            rest = [w for w in cell if w != v]
            rec(_refine(cells[:idx] + [[v], rest] + cells[idx + 1:], adj))

    if g.n_vertices == 0:
        return ((), ()), [], 1
    rec(cells)
    return best[0], best[1], best[2]


def canonical_form(g: Graph) -> Graph:
    _, order, _ = _search(g)
    perm = [0] * g.n_vertices
    for i, v in enumerate(order):
        perm[v] = i
    return g.permuted(perm)


def canonical_key(g: Graph):
    return _search(g)[0]


def automorphism_order(g: Graph) -> int:
    _, _, vperms = _search(g)
    mult = 1
    for (u, v, m), k in Counter(g.edges).items():
        mult *= factorial(k)
        if u == v:
            mult *= 2 ** k
    for _, k in Counter(g.leaves).items():
        mult *= factorial(k)
    return vperms * mult


def isomorphic(g: Graph, h: Graph) -> bool:
    return canonical_key(g) == canonical_key(h)


@dataclass(frozen=True)
class IsoClass:
    graph: Graph
    aut_order: int
    key: tuple = field(compare=False, repr=False, default=())

    @property
    def weight(self):
        from fractions import Fraction
        return Fraction(1, self.aut_order)

    def to_json(self) -> dict:
        d = self.graph.to_json()
        d["aut_order"] = self.aut_order
        return d


def iso_class(g: Graph) -> IsoClass:
    c = canonical_form(g)
    return IsoClass(c, automorphism_order(c), canonical_key(c))


# ---------------------------------------------------------- enumeration

def _shapes(V: int, genus: int, n_leaves: int) -> list:
    """Connected multigraphs on V vertices, max degree 3, with the right edge count."""
    n_edges = V - 1 + genus
    out = []
    pairs = [(i, j) for i in range(V) for j in range(i, V)]
    deg = [0] * V
    chosen = []

    def rec(k, edges_left):
        if edges_left == 0:
            if sum(3 - d for d in deg) != n_leaves:
                return
            g = Graph(V, tuple((i, j, BLACK) for i, j in chosen))
            if g.is_connected():
                out.append(g)
            return
        if k == len(pairs):
            return
        i, j = pairs[k]
        inc = 2 if i == j else 1
        rec(k + 1, edges_left)
        cnt = 0
        while edges_left - cnt > 0 and deg[i] + inc <= 3 and (i == j or deg[j] + 1 <= 3):
            deg[i] += 1
            deg[j] += 1
            chosen.append((i, j))
            cnt += 1
            rec(k + 1, edges_left - cnt)
        for _ in range(cnt):
            deg[i] -= 1
            deg[j] -= 1
            chosen.pop()

    rec(0, n_edges)
    uniq = {}
    for g in out:
        uniq.setdefault(canonical_key(g), canonical_form(g))
    return [uniq[k] for k in sorted(uniq)]


def _labelings(shape: Graph, labels: Sequence[str]) -> Iterable[Graph]:
    slots = [v for v in range(shape.n_vertices) for _ in range(3 - shape.degree(v))]
    seen = set()
    for perm in set(itertools.permutations(sorted(labels))):
        leaves = tuple(sorted(zip(slots, perm)))
        if leaves in seen:
            continue
        seen.add(leaves)
        yield Graph(shape.n_vertices, shape.edges, leaves)


def enumerate_graphs(n_leaves: int, labels: Optional[Sequence[str]] = None, genus: int = 0,
                     max_vertices: int = 12) -> list:
    """All trivalent isomorphism classes with the given leaf labels and genus."""
    if genus not in (0, 1):
        raise InputError("genus must be 0 or 1")
    if n_leaves < 0:
        raise InputError("n_leaves must be non-negative")
    labels = list(labels) if labels is not None else ["E"] * n_leaves
    if len(labels) != n_leaves:
        raise InputError("label multiset must have n_leaves entries")
    V = n_leaves + 2 * genus - 2
    if V < 1 or V > max_vertices:
        return []
    classes = {}
    for shape in _shapes(V, genus, n_leaves):
        for g in _labelings(shape, labels):
            key = canonical_key(g)
            if key not in classes:
                classes[key] = g
    out = []
    for key in sorted(classes):
        c = canonical_form(classes[key])
        out.append(IsoClass(c, automorphism_order(c), key))
    return out


def count_labeled_trees_oracle(n: int) -> list:
    """Leaf-labeled trivalent trees by inserting leaf k on every edge in turn.

    Trees are stored as edge sets on nodes 'L1'.. (leaves) and integers
    (internal); the result is a list of Graphs with leaf labels '1'..'n'.
    """
    if n < 3:
        return []
    trees = [frozenset({("L1", 0), ("L2", 0), ("L3", 0)})]
    nxt = 1
    for k in range(4, n + 1):
        new = []
        for t in trees:
            for edge in sorted(t, key=str):
                a, b = edge
                w = max(x for e in t for x in e if isinstance(x, int)) + 1
                s = set(t)
                s.remove(edge)
                s |= {(a, w), (b, w), (f"L{k}", w)}
                new.append(frozenset(s))
        trees = new
    out = []
    for t in trees:
        internal = sorted({x for e in t for x in e if isinstance(x, int)})
        idx = {v: i for i, v in enumerate(internal)}
        edges, leaves = [], []
        for a, b in t:
            if isinstance(a, str):
                leaves.append((idx[b], a[1:]))
            elif isinstance(b, str):
                leaves.append((idx[a], b[1:]))
            else:
                edges.append((idx[a], idx[b], BLACK))
        out.append(Graph(len(internal), tuple(edges), tuple(leaves)))
    return out


def double_factorial(k: int) -> int:
    r = 1
    while k > 1:
        r *= k
        k -= 2
    return r


# -------------------------------------------------------------- J edges

def cycle_edges(g: Graph) -> list:
    """Indices of edges whose removal keeps the graph connected."""
    out = []
    for k in range(len(g.edges)):
        rest = g.edges[:k] + g.edges[k + 1:]
        h = Graph.__new__(Graph)
        object.__setattr__(h, "n_vertices", g.n_vertices)
        object.__setattr__(h, "edges", rest)
        object.__setattr__(h, "leaves", g.leaves)
        if h.is_connected():
            out.append(k)
    return out


def select_j_edges(g: Graph, all_choices: bool = False):
    """Canonical J-edge (first cycle edge), or every valid choice."""
    if g.genus != 1:
        raise InputError(f"J-edge selection needs a genus-1 graph, got genus {g.genus}")
    cyc = cycle_edges(g)
    return cyc if all_choices else [cyc[0]]
