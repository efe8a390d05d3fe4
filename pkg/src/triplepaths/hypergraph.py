"""3-uniform hypergraphs on dense integer vertex ids.

A :class:`Hypergraph3` is an immutable set of sorted triples on ``0..n-1``.
Vertices are never relabelled: induced subhypergraphs and cores keep the
ids of the parent so decompositions can be cross-referenced directly.
"""

from __future__ import annotations

import heapq
import io
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence, TextIO

from .graphs import TraceGraph

Triple = tuple[int, int, int]
Pair = tuple[int, int]


class HypergraphFormatError(ValueError):
    """Raised when a hypergraph text file is malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def make_triple(a: int, b: int, c: int) -> Triple:
    t = tuple(sorted((int(a), int(b), int(c))))
    if t[0] == t[1] or t[1] == t[2]:
        raise ValueError(f"triple has repeated vertices: {(a, b, c)}")
    return t  # type: ignore[return-value]


@dataclass(frozen=True)
class Hypergraph3:
    """A 3-uniform hypergraph.

    ``triples`` is kept sorted lexicographically; construction validates
    vertex ranges and rejects duplicate triples.
    """

    n: int
    triples: tuple[Triple, ...] = field(default=())

    def __init__(self, n: int, triples: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        seen: set[Triple] = set()
        for raw in triples:
            if len(raw) != 3:
                raise ValueError(f"not a triple: {raw!r}")
            t = make_triple(*raw)
            if t[0] < 0 or t[2] >= n:
                raise ValueError(f"triple {t} out of range for n={n}")
            if t in seen:
                raise ValueError(f"duplicate triple {t}")
            seen.add(t)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "triples", tuple(sorted(seen)))

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def __contains__(self, t: object) -> bool:
        if not isinstance(t, tuple) or len(t) != 3:
            return False
        return tuple(sorted(t)) in self.triple_set

    @cached_property
    def triple_set(self) -> frozenset[Triple]:
        return frozenset(self.triples)

    @cached_property
    def incidence(self) -> dict[int, tuple[Triple, ...]]:
        """vertex -> triples containing it (ascending)."""
        inc: dict[int, list[Triple]] = defaultdict(list)
        for t in self.triples:
            for v in t:
                inc[v].append(t)
        return {v: tuple(ts) for v, ts in inc.items()}

    @cached_property
    def pair_index(self) -> dict[Pair, tuple[int, ...]]:
        """sorted pair -> third vertices completing it to a triple."""
        idx: dict[Pair, list[int]] = defaultdict(list)
        for a, b, c in self.triples:
            idx[(a, b)].append(c)
            idx[(a, c)].append(b)
            idx[(b, c)].append(a)
        return {p: tuple(sorted(vs)) for p, vs in idx.items()}

    def degree(self, v: int) -> int:
        return len(self.incidence.get(v, ()))

    def degrees(self) -> list[int]:
        return [self.degree(v) for v in range(self.n)]

    def support(self) -> frozenset[int]:
        """Vertices of positive degree."""
        return frozenset(self.incidence)

    def add(self, triples: Iterable[Sequence[int]]) -> "Hypergraph3":
        extra = {make_triple(*t) for t in triples} - self.triple_set
        return Hypergraph3(self.n, self.triples + tuple(extra))

    def remove(self, triples: Iterable[Sequence[int]]) -> "Hypergraph3":
        drop = {make_triple(*t) for t in triples}
        return Hypergraph3(self.n, (t for t in self.triples if t not in drop))

    def relabel(self, perm: Sequence[int]) -> "Hypergraph3":
        """Image under the vertex map ``v -> perm[v]``."""
        return Hypergraph3(self.n, ((perm[a], perm[b], perm[c]) for a, b, c in self.triples))


def complete_hypergraph(n: int, vertices: Iterable[int] | None = None) -> Hypergraph3:
    vs = sorted(vertices) if vertices is not None else range(n)
    return Hypergraph3(n, combinations(vs, 3))


def _check_vertex(H: Hypergraph3, v: int) -> None:
    if not 0 <= v < H.n:
        raise ValueError(f"vertex {v} out of range for n={H.n}")


def trace_vertex(H: Hypergraph3, v: int) -> TraceGraph:
    """The link graph of ``v``: pairs completing ``v`` to a triple of ``H``."""
    _check_vertex(H, v)
    edges = []
    for t in H.incidence.get(v, ()):
        a, b = (x for x in t if x != v)
        edges.append((a, b))
    return TraceGraph(H.n, edges, center=v)


def codegree(H: Hypergraph3, u: int, v: int) -> int:
    _check_vertex(H, u)
    _check_vertex(H, v)
    if u == v:
        raise ValueError("codegree needs two distinct vertices")
    return len(H.pair_index.get((min(u, v), max(u, v)), ()))


def induced(H: Hypergraph3, U: Iterable[int]) -> Hypergraph3:
    """Triples of ``H`` lying inside ``U``; vertex ids are preserved."""
    keep = frozenset(U)
    for v in keep:
        _check_vertex(H, v)
    return Hypergraph3(H.n, (t for t in H.triples if t[0] in keep and t[1] in keep and t[2] in keep))


@dataclass(frozen=True)
class CoreResult:
    core: Hypergraph3
    stray: frozenset[Triple]
    removal_order: tuple[int, ...]


def m_core(H: Hypergraph3, m: int, priority: Sequence[int] | None = None) -> CoreResult:
    """Iteratively delete a vertex of positive degree below ``m``.

    The vertex deleted at each step is the one with the smallest
    ``priority`` value (default: its id) among those currently eligible.
    The resulting core does not depend on the priority.
    """
    if m < 1:
        raise ValueError("core threshold must be at least 1")
    rank = list(priority) if priority is not None else list(range(H.n))
    if len(rank) != H.n:
        raise ValueError("priority must give one rank per vertex")

    deg = [0] * H.n
    for v, ts in H.incidence.items():
        deg[v] = len(ts)
    alive = set(H.triples)
    removed_vertex = [False] * H.n
    heap = [(rank[v], v) for v in range(H.n) if 0 < deg[v] < m]
    heapq.heapify(heap)
    order: list[int] = []
    stray: set[Triple] = set()

    while heap:
        _, v = heapq.heappop(heap)
        if removed_vertex[v] or not 0 < deg[v] < m:
            continue
        removed_vertex[v] = True
        order.append(v)
        for t in H.incidence[v]:
            if t not in alive:
                continue
            alive.discard(t)
            stray.add(t)
            for w in t:
                deg[w] -= 1
                if w != v and 0 < deg[w] < m and not removed_vertex[w]:
                    heapq.heappush(heap, (rank[w], w))

    return CoreResult(Hypergraph3(H.n, alive), frozenset(stray), tuple(order))


# -- text format ---------------------------------------------------------


def parse_hypergraph(text: str | TextIO) -> Hypergraph3:
    """Read ``n m`` followed by ``m`` lines ``a b c`` with ``a < b < c < n``."""
    stream = io.StringIO(text) if isinstance(text, str) else text
    lines = [(i, ln.split()) for i, ln in enumerate(stream, start=1)]
    lines = [(i, parts) for i, parts in lines if parts]
    if not lines:
        raise HypergraphFormatError("empty input")
    lineno, header = lines[0]
    if len(header) != 2:
        raise HypergraphFormatError("header must be 'n m'", lineno)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise HypergraphFormatError("header must be two integers", lineno) from None
    if n < 0 or m < 0:
        raise HypergraphFormatError("negative header value", lineno)
    body = lines[1:]
    if len(body) != m:
        raise HypergraphFormatError(f"expected {m} triples, found {len(body)}")
    seen: dict[Triple, int] = {}
    for lineno, parts in body:
        if len(parts) != 3:
            raise HypergraphFormatError("expected three vertex ids", lineno)
        try:
            a, b, c = (int(p) for p in parts)
        except ValueError:
            raise HypergraphFormatError("vertex ids must be integers", lineno) from None
        if not 0 <= a < b < c < n:
            raise HypergraphFormatError(f"need 0 <= a < b < c < {n}", lineno)
        if (a, b, c) in seen:
            raise HypergraphFormatError(
                f"duplicate triple {a} {b} {c} (first seen on line {seen[(a, b, c)]})", lineno
            )
        seen[(a, b, c)] = lineno
    return Hypergraph3(n, seen)


def format_hypergraph(H: Hypergraph3) -> str:
    out = [f"{H.n} {len(H)}"]
    out.extend(f"{a} {b} {c}" for a, b, c in H.triples)
    return "\n".join(out) + "\n"


def read_hypergraph(path) -> Hypergraph3:
    with open(path, encoding="ascii") as fh:
        return parse_hypergraph(fh)


def write_hypergraph(H: Hypergraph3, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_hypergraph(H))

