"""Shared test helpers: independent oracles kept deliberately naive."""
from __future__ import annotations

import itertools

import numpy as np

from gplab.algebras import FiniteDimAlgebra, StateSpec, site_from_hecke, site_from_state
from gplab.graphs import SimplicialGraph
from gplab.system import GraphSystem


def brute_force_cliques(g: SimplicialGraph) -> set[frozenset]:
    """Subset-enumeration clique oracle."""
    out = set()
    verts = list(g.vertices)
    for r in range(len(verts) + 1):
        for sub in itertools.combinations(verts, r):
            if all(g.adjacent(u, v) for u, v in itertools.combinations(sub, 2)):
                out.add(frozenset(sub))
    return out


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def connected_by_union_find(g: SimplicialGraph) -> bool:
    if not g.vertices:
        return True
    uf = UnionFind(g.vertices)
    for u, v in g.edges:
        uf.union(u, v)
    roots = {uf.find(v) for v in g.vertices}
    return len(roots) == 1


def all_graphs(n: int):
    """Every labeled graph on vertices 0..n-1."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        yield SimplicialGraph.build(range(n), edges)


def shuffle_class(group, word: tuple) -> set[tuple]:
    """All words reachable from a reduced word by adjacent-transposition
    shuffles along graph edges."""
    seen = {word}
    stack = [word]
    while stack:
        w = stack.pop()
        for i in range(len(w) - 1):
            if group.graph.adjacent(w[i], w[i + 1]):
                nw = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                if nw not in seen:
                    seen.add(nw)
                    stack.append(nw)
    return seen


def occurrence_permutation(v: tuple, w: tuple):
    """The order-preserving permutation with w[k] = v[sigma[k]], matching
    occurrences of equal letters in order; None if impossible."""
    positions: dict = {}
    for i, letter in enumerate(v):
        positions.setdefault(letter, []).append(i)
    counters = {letter: 0 for letter in positions}
    sigma = []
    for letter in w:
        if letter not in positions or counters[letter] >= len(positions[letter]):
            return None
        sigma.append(positions[letter][counters[letter]])
        counters[letter] += 1
    return tuple(sigma)


# -- standard test graphs -------------------------------------------------------

FREE3 = SimplicialGraph.build([0, 1, 2], [])
PATH3 = SimplicialGraph.build([0, 1, 2], [(0, 1), (1, 2)])
K3 = SimplicialGraph.build([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
CYC4 = SimplicialGraph.build([0, 1, 2, 3], [(0, 1), (1, 2), (2, 3), (0, 3)])
CYC5 = SimplicialGraph.build([0, 1, 2, 3, 4], [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
FREE4 = SimplicialGraph.build([0, 1, 2, 3], [])
K2 = SimplicialGraph.build([0, 1], [(0, 1)])
FREE2 = SimplicialGraph.build([0, 1], [])


def m2_site(density=None):
    alg = FiniteDimAlgebra((2,))
    rho = np.eye(2, dtype=complex) * 0.5 if density is None else np.asarray(density, dtype=complex)
    return site_from_state(alg, StateSpec.build(alg, [rho]))


def c2_site(p: float = 0.3):
    alg = FiniteDimAlgebra((1, 1))
    return site_from_state(alg, StateSpec.build(alg, [np.array([[p]]), np.array([[1 - p]])]))


def mixed_system(graph: SimplicialGraph, hecke_q: float = 1.0) -> GraphSystem:
    """One Hecke, one two-point, one matrix vertex; the standard mixed rig."""
    sites = {
        graph.vertices[0]: site_from_hecke(hecke_q),
        graph.vertices[1]: c2_site(0.3),
        graph.vertices[2]: m2_site([[0.6, 0.1], [0.1, 0.4]]),
    }
    for v in graph.vertices[3:]:
        sites[v] = site_from_hecke(hecke_q)
    return GraphSystem(graph, sites)


def hecke_system(graph: SimplicialGraph, q: float) -> GraphSystem:
    return GraphSystem(graph, {v: site_from_hecke(q) for v in graph.vertices})
