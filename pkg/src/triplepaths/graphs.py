"""Exact graph and digraph routines used on hypergraph traces."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Pair = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``0..n-1``; edges stored as sorted pairs."""

    n: int
    edges: frozenset[Pair] = field(default=frozenset())

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {(u, v)} out of range for n={n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(norm))

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = defaultdict(set)
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {u: frozenset(vs) for u, vs in adj.items()}

    def degree(self, v: int) -> int:
        return len(self.adjacency.get(v, ()))

    def sorted_edges(self) -> list[Pair]:
        return sorted(self.edges)


@dataclass(frozen=True)
class TraceGraph(Graph):
    """Trace (link) of ``center``: the center itself is never an endpoint."""

    center: int = -1

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), center: int = -1):
        super().__init__(n, edges)
        object.__setattr__(self, "center", int(center))
        if any(self.center in e for e in self.edges):
            raise ValueError("trace edges may not contain the center")


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset[Pair] = field(default=frozenset())

    def __init__(self, n: int, arcs: Iterable[Sequence[int]] = ()):
        norm = set()
        for u, v in arcs:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc {(u, v)} out of range for n={n}")
            norm.add((int(u), int(v)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "arcs", frozenset(norm))

    @cached_property
    def out_neighbors(self) -> list[frozenset[int]]:
        out: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            out[u].add(v)
        return [frozenset(s) for s in out]

    @cached_property
    def in_neighbors(self) -> list[frozenset[int]]:
        inn: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            inn[v].add(u)
        return [frozenset(s) for s in inn]


# -- matching ------------------------------------------------------------


def _local_adjacency(G: Graph) -> tuple[list[int], list[list[int]]]:
    verts = sorted(G.adjacency)
    index = {v: i for i, v in enumerate(verts)}
    adj = [sorted(index[w] for w in G.adjacency[v]) for v in verts]
    return verts, adj


def _augment_once(n: int, adj: list[list[int]], mate: list[int], root: int) -> bool:
    """One Edmonds search from an exposed ``root``; flips the path if found."""
    parent = [-1] * n
    base = list(range(n))
    used = [False] * n
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    # augment along the alternating path ending at `to`
                    u = to
                    while u != -1:
                        pv = parent[u]
                        nxt = mate[pv]
                        mate[u] = pv
                        mate[pv] = u
                        u = nxt
                    return True
                used[mate[to]] = True
                queue.append(mate[to])
    return False


def maximum_matching(G: Graph, limit: int | None = None) -> list[Pair]:
    """A maximum matching of a general graph (Edmonds' blossom algorithm).

    With ``limit`` the search stops as soon as that many edges are matched,
    so the result has size ``min(limit, nu(G))``.
    """
    verts, adj = _local_adjacency(G)
    n = len(verts)
    mate = [-1] * n
    size = 0
    # greedy start; augmentations then only repair what greedy missed
    for v in range(n):
        if limit is not None and size >= limit:
            break
        if mate[v] == -1:
            for w in adj[v]:
                if mate[w] == -1:
                    mate[v], mate[w] = w, v
                    size += 1
                    break
    for v in range(n):
        if limit is not None and size >= limit:
            break
        if mate[v] == -1 and _augment_once(n, adj, mate, v):
            size += 1
    pairs = {(min(verts[i], verts[j]), max(verts[i], verts[j])) for i, j in enumerate(mate) if j != -1}
    return sorted(pairs)


def matching_at_least(G: Graph, s: int) -> bool:
    return len(maximum_matching(G, limit=s)) >= s


def max_matching_size(G: Graph) -> int:
    return len(maximum_matching(G))


def capped_matching_number(G: Graph, cap: int = 4) -> int:
    """``min(nu(G), cap)``; enough to tell 0, 1, 2, 3 and 'at least 4' apart."""
    return len(maximum_matching(G, limit=cap))


# -- vertex cover --------------------------------------------------------


def vertex_cover_at_most(G: Graph, t: int) -> frozenset[int] | None:
    """A vertex cover of size at most ``t``, or ``None`` if none exists.

    Bounded search tree: branch on both endpoints of the first uncovered
    edge. A vertex of degree above the remaining budget is forced.
    """
    if t < 0:
        return None

    def solve(edges: list[Pair], budget: int) -> list[int] | None:
        if not edges:
            return []
        if budget == 0:
            return None
        deg: dict[int, int] = defaultdict(int)
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        if len(edges) > budget * max(deg.values()):
            return None
        forced = min((v for v, d in deg.items() if d > budget), default=None)
        branches = [forced] if forced is not None else list(edges[0])
        for w in branches:
            rest = [e for e in edges if w not in e]
            sub = solve(rest, budget - 1)
            if sub is not None:
                return [w] + sub
        return None

    found = solve(G.sorted_edges(), t)
    return None if found is None else frozenset(found)


def min_vertex_cover_size(G: Graph, cap: int | None = None) -> int:
    """Exact cover number, or ``cap`` if it is at least ``cap``."""
    t = 0
    while cap is None or t < cap:
        if vertex_cover_at_most(G, t) is not None:
            return t
        t += 1
    return cap


def star_center(G: Graph) -> int | None:
    """Center of ``G`` if every edge meets one common vertex, else ``None``.

    A single edge has two candidate centers; the smaller one is returned.
    """
    if not G.edges:
        return None
    common: set[int] | None = None
    for e in G.edges:
        common = set(e) if common is None else common & set(e)
        if not common:
            return None
    return min(common)


# -- components ----------------------------------------------------------


def connected_components(G: Graph) -> list[frozenset[int]]:
    """Components of the non-isolated vertices, ordered by smallest vertex."""
    seen: set[int] = set()
    comps = []
    for s in sorted(G.adjacency):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for w in G.adjacency[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


# -- digraphs ------------------------------------------------------------


def is_oriented(D: Digraph) -> bool:
    return all((v, u) not in D.arcs for u, v in D.arcs)


def min_in_degree(D: Digraph) -> int:
    if D.n == 0:
        return 0
    return min(len(s) for s in D.in_neighbors)


def find_directed_triangle(D: Digraph) -> tuple[int, int, int] | None:
    """First ``(x, y, z)`` with arcs ``xy, yz, zx``, scanning arcs in order."""
    out, inn = D.out_neighbors, D.in_neighbors
    for x, y in sorted(D.arcs):
        common = out[y] & inn[x]
        if common:
            return (x, y, min(common))
    return None


@dataclass(frozen=True)
class TriangleCensus:
    count: int
    saturated: bool
    samples: tuple[tuple[int, int, int], ...]


def directed_triangle_census(D: Digraph, cap: int | None = None, max_samples: int = 100) -> TriangleCensus:
    """Count directed 3-cycles, each once (rotated to start at its minimum).

    Counting stops at ``cap`` when given.
    """
    out, inn = D.out_neighbors, D.in_neighbors
    count = 0
    samples = []
    for x, y in sorted(D.arcs):
        if y < x:
            continue
        for z in sorted(out[y] & inn[x]):
            if z < x:
                continue
            count += 1
            if len(samples) < max_samples:
                samples.append((x, y, z))
            if cap is not None and count >= cap:
                return TriangleCensus(count, True, tuple(samples))
    return TriangleCensus(count, False, tuple(samples))


def transitive_tournament(n: int) -> Digraph:
    return Digraph(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def rotational_tournament(n: int) -> Digraph:
    """Circulant tournament on odd ``n``: ``i -> i + j`` for ``1 <= j <= (n-1)/2``."""
    if n % 2 == 0:
        raise ValueError("rotational tournaments need odd n")
    half = (n - 1) // 2
    return Digraph(n, ((i, (i + j) % n) for i in range(n) for j in range(1, half + 1)))
