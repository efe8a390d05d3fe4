"""Small 3-uniform patterns and exact containment search."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator

from .hypergraph import Hypergraph3, Triple, trace_vertex


class PatternName(enum.Enum):
    LOOSE = "loose"
    MESSY = "messy"
    TIGHT = "tight"
    KITE = "kite"
    CYCLE = "cycle"
    F5 = "f5"
    GIRAFFE = "giraffe"
    FLOWER = "flower"


# vertex letters a, b, c, ... map to 0, 1, 2, ...
_FIXED = {
    PatternName.LOOSE: ((0, 1, 2), (2, 3, 4), (4, 5, 6)),  # abc, cde, efg
    PatternName.MESSY: ((0, 1, 2), (1, 2, 3), (3, 4, 5)),  # abc, bcd, def
    PatternName.TIGHT: ((0, 1, 2), (1, 2, 3), (2, 3, 4)),  # abc, bcd, cde
    PatternName.KITE: ((0, 1, 2), (0, 1, 3)),  # abc, abd
    PatternName.CYCLE: ((0, 1, 2), (2, 3, 4), (0, 4, 5)),  # abc, cde, afe
    PatternName.F5: ((0, 1, 2), (0, 1, 3), (2, 3, 4)),  # abc, abd, cde
    PatternName.GIRAFFE: ((0, 1, 2), (0, 1, 3), (1, 4, 5)),  # abc, abd, bef
}


@dataclass(frozen=True)
class PathPattern:
    name: PatternName
    triples: Hypergraph3
    a: int | None = None

    @property
    def num_vertices(self) -> int:
        return self.triples.n

    @property
    def label(self) -> str:
        return f"flower:{self.a}" if self.name is PatternName.FLOWER else self.name.value


def pattern(name: PatternName | str, a: int | None = None) -> PathPattern:
    """Canonical pattern on vertices ``0..size-1``.

    ``Flower(a)`` has petals ``0..a-1`` and center ``{a, a+1}``.
    """
    if isinstance(name, str):
        name = PatternName(name)
    if name is PatternName.FLOWER:
        if a is None:
            raise ValueError("flower needs a petal count")
        if a < 1:
            raise ValueError("flower petal count must be at least 1")
        return PathPattern(name, Hypergraph3(a + 2, ((i, a, a + 1) for i in range(a))), a)
    if a is not None:
        raise ValueError(f"{name.value} takes no petal count")
    triples = _FIXED[name]
    return PathPattern(name, Hypergraph3(1 + max(max(t) for t in triples), triples))


def parse_pattern(spec: str) -> PathPattern:
    """Parse ``loose|messy|tight|kite|cycle|f5|giraffe|flower:<a>``."""
    spec = spec.strip().lower()
    if spec.startswith("flower"):
        _, sep, num = spec.partition(":")
        if not sep or not num.isdigit():
            raise ValueError("flower pattern must be written flower:<a>")
        return pattern(PatternName.FLOWER, int(num))
    try:
        return pattern(PatternName(spec))
    except ValueError:
        raise ValueError(f"unknown pattern {spec!r}") from None


ALL_FIXED = tuple(pattern(nm) for nm in _FIXED)


# -- containment search --------------------------------------------------

Embedding = tuple[int, ...]


def _triple_order(ptriples: tuple[Triple, ...], first: int) -> list[Triple]:
    """Pattern triples ordered so each one meets an earlier one, if possible."""
    order = [ptriples[first]]
    covered = set(ptriples[first])
    rest = [t for i, t in enumerate(ptriples) if i != first]
    while rest:
        pick = next((t for t in rest if covered & set(t)), rest[0])
        rest.remove(pick)
        order.append(pick)
        covered |= set(pick)
    return order


class _Host:
    """Lookup tables over a host hypergraph used by the backtracking search."""

    def __init__(self, H: Hypergraph3):
        self.H = H
        self.inc = H.incidence
        self.pairs = H.pair_index
        # vertices lying in every triple through v (besides v itself)
        self.forced: dict[int, frozenset[int]] = {}
        for v, ts in self.inc.items():
            common = set(ts[0])
            for t in ts[1:]:
                common &= set(t)
                if len(common) == 1:
                    break
            common.discard(v)
            self.forced[v] = frozenset(common)

    def candidates(self, images: list[int]) -> tuple[Triple, ...] | list[Triple]:
        if not images:
            return self.H.triples
        if len(images) == 1:
            return self.inc.get(images[0], ())
        if len(images) == 2:
            a, b = sorted(images)
            return [tuple(sorted((a, b, c))) for c in self.pairs.get((a, b), ())]
        t = tuple(sorted(images))
        return [t] if t in self.H.triple_set else []


def iter_embeddings(
    H: Hypergraph3, P: PathPattern, anchor: Triple | None = None, _host: _Host | None = None
) -> Iterator[Embedding]:
    """All injective maps of ``P`` into ``H`` sending triples to triples.

    With ``anchor`` only embeddings using that host triple are produced
    (each still once per pattern reachable through it; duplicates possible
    across anchor positions).
    Order: pattern triples in a connected order, host triples ascending,
    vertex bijections in permutation order.
    """
    host = _host or _Host(H)
    ptriples = P.triples.triples
    nv = P.num_vertices
    if anchor is not None:
        anchor = tuple(sorted(anchor))
        if anchor not in H.triple_set:
            return
        starts = range(len(ptriples))
    else:
        starts = range(1)
    for first in starts:
        order = _triple_order(ptriples, first)
        mapping = [-1] * nv
        used: set[int] = set()
        yield from _extend(host, order, 0, mapping, used, anchor)


def _extend(host: _Host, order, i, mapping, used, anchor) -> Iterator[Embedding]:
    if i == len(order):
        yield tuple(mapping)
        return
    pt = order[i]
    mapped = [p for p in pt if mapping[p] >= 0]
    free = [p for p in pt if mapping[p] < 0]
    images = [mapping[p] for p in mapped]
    if len(images) == 1:
        # every triple through the image also holds these vertices
        blocked = host.forced.get(images[0], frozenset()) & used
        if blocked:
            return
    cands = [anchor] if (i == 0 and anchor is not None) else host.candidates(images)
    img_set = set(images)
    for ht in cands:
        if not img_set.issubset(ht):
            continue
        rest = [h for h in ht if h not in img_set]
        if any(h in used for h in rest):
            continue
        for perm in permutations(rest):
            for p, h in zip(free, perm):
                mapping[p] = h
                used.add(h)
            yield from _extend(host, order, i + 1, mapping, used, anchor)
            for p, h in zip(free, perm):
                mapping[p] = -1
                used.discard(h)


def contains_pattern(H: Hypergraph3, P: PathPattern, anchor: Triple | None = None) -> Embedding | None:
    """First embedding of ``P`` in ``H`` in search order, or ``None``."""
    if P.num_vertices > H.n or len(P.triples) > len(H):
        return None
    return next(iter_embeddings(H, P, anchor), None)


def is_embedding(H: Hypergraph3, P: PathPattern, emb: Embedding) -> bool:
    if len(emb) != P.num_vertices or len(set(emb)) != len(emb):
        return False
    return all(tuple(sorted(emb[v] for v in t)) in H.triple_set for t in P.triples)


def embedded_triples(P: PathPattern, emb: Embedding) -> list[Triple]:
    return [tuple(sorted(emb[v] for v in t)) for t in P.triples]


# -- forbidden configurations --------------------------------------------


@dataclass(frozen=True)
class LooseWitness:
    """Disjoint trace edges ``e, e2`` of ``v`` and a triple avoiding ``v``
    that meets ``e`` in exactly one vertex and misses ``e2``."""

    v: int
    e: tuple[int, int]
    e2: tuple[int, int]
    triple: Triple

    def path(self) -> list[Triple]:
        a, b = self.e
        c, d = self.e2
        return [self.triple, tuple(sorted((self.v, a, b))), tuple(sorted((self.v, c, d)))]


def loose_forbidden_config(H: Hypergraph3, v: int) -> LooseWitness | None:
    tr = trace_vertex(H, v)
    if len(tr.edges) < 2:
        return None
    edges = tr.sorted_edges()
    adj = tr.adjacency
    for t in H.triples:
        if v in t:
            continue
        tset = set(t)
        for p in t:
            for q in sorted(adj.get(p, ())):
                if q in tset:
                    continue
                e = (min(p, q), max(p, q))
                for e2 in edges:
                    if e2[0] in tset or e2[1] in tset or e2[0] in e or e2[1] in e:
                        continue
                    return LooseWitness(v, e, e2, t)
    return None


@dataclass(frozen=True)
class MessyWitness:
    """``form == 1``: disjoint trace edges ``ab, cd`` and triple ``abx``.
    ``form == 2``: trace path ``ab, bc`` and triple ``axy``."""

    v: int
    form: int
    trace_edges: tuple[tuple[int, int], tuple[int, int]]
    triple: Triple

    def path(self) -> list[Triple]:
        (p, q), (r, s) = self.trace_edges
        return [self.triple, tuple(sorted((self.v, p, q))), tuple(sorted((self.v, r, s)))]


def messy_forbidden_config(H: Hypergraph3, v: int) -> MessyWitness | None:
    tr = trace_vertex(H, v)
    if len(tr.edges) < 2:
        return None
    edges = tr.sorted_edges()
    adj = tr.adjacency
    # form 1: ab, cd disjoint in Tr(v); abx in H with x not in {v, c, d}
    for a, b in edges:
        thirds = [x for x in H.pair_index.get((a, b), ()) if x != v]
        if not thirds:
            continue
        for c, d in edges:
            if c in (a, b) or d in (a, b):
                continue
            for x in thirds:
                if x not in (c, d):
                    return MessyWitness(v, 1, ((a, b), (c, d)), tuple(sorted((a, b, x))))
    # form 2: ab, bc a path in Tr(v); axy in H with x, y not in {v, b, c}
    for a in sorted(adj):
        for b in sorted(adj[a]):
            for c in sorted(adj[b]):
                if c == a:
                    continue
                bad = {v, b, c}
                for t in H.incidence.get(a, ()):
                    if not bad & set(t):
                        return MessyWitness(
                            v, 2, ((min(a, b), max(a, b)), (min(b, c), max(b, c))), t
                        )
    return None


# -- copies in the complete hypergraph -----------------------------------


def copies_in_complete(P: PathPattern, n: int, index: dict[Triple, int]) -> list[int]:
    """Every copy of ``P`` in the complete 3-graph on ``n`` vertices.

    Each copy is returned once, as a bitmask over ``index`` (triple ->
    bit position). Enumerates all injective vertex maps.
    """
    seen: set[int] = set()
    pts = P.triples.triples
    for img in permutations(range(n), P.num_vertices):
        mask = 0
        for t in pts:
            mask |= 1 << index[tuple(sorted((img[t[0]], img[t[1]], img[t[2]])))]
        seen.add(mask)
    return sorted(seen)
