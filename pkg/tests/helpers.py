"""Brute-force oracles and instance builders shared by the tests.

The oracles deliberately avoid the library's search code: they enumerate
maps, subsets and colorings directly.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb

import numpy as np

from triplepaths.coloring import Coloring, colex_rank, colex_triples
from triplepaths.graphs import Digraph, Graph
from triplepaths.hypergraph import Hypergraph3
from triplepaths.patterns import PathPattern
from triplepaths.structure import GeneratorParams, generate_free, packing_number

# -- oracles -------------------------------------------------------------


@lru_cache(maxsize=None)
def _injective_maps(n: int, k: int) -> np.ndarray:
    return np.array(list(permutations(range(n), k)), dtype=np.intp).reshape(-1, k)


def brute_contains(triples, n: int, P: PathPattern) -> bool:
    """Any injective vertex map sending every pattern triple into ``triples``.

    Checks all maps at once against a dense adjacency cube.
    """
    if P.num_vertices > n:
        return False
    cube = np.zeros((n, n, n), dtype=bool)
    for t in triples:
        for a, b, c in permutations(t):
            cube[a, b, c] = True
    maps = _injective_maps(n, P.num_vertices)
    ok = np.ones(len(maps), dtype=bool)
    for a, b, c in P.triples.triples:
        ok &= cube[maps[:, a], maps[:, b], maps[:, c]]
    return bool(ok.any())


def brute_matching_number(edges) -> int:
    edges = list(edges)
    best = 0
    for r in range(1, len(edges) + 1):
        found = False
        for sub in combinations(edges, r):
            vs = [v for e in sub for v in e]
            if len(set(vs)) == len(vs):
                found = True
                break
        if not found:
            break
        best = r
    return best


def brute_cover_number(edges, n: int) -> int:
    edges = list(edges)
    for r in range(n + 1):
        for S in combinations(range(n), r):
            s = set(S)
            if all(u in s or v in s for u, v in edges):
                return r
    return n


def naive_core(triples, m: int) -> set:
    """Repeatedly delete every triple through a vertex of degree below m."""
    cur = {tuple(sorted(t)) for t in triples}
    while True:
        deg = {}
        for t in cur:
            for v in t:
                deg[v] = deg.get(v, 0) + 1
        low = {v for v, d in deg.items() if d < m}
        if not low:
            return cur
        cur = {t for t in cur if not low & set(t)}


def brute_extremal(P: PathPattern, n: int) -> tuple[int, list[int]]:
    """Max size of a P-free subset of all triples, by scanning all 2^C(n,3) masks.

    Returns the max and all masks attaining it (bit i = i-th colex triple).
    """
    triples = list(colex_triples(n))
    index = {t: i for i, t in enumerate(triples)}
    N = len(triples)
    masks = np.arange(1 << N, dtype=np.uint64)
    ok = np.ones(1 << N, dtype=bool)
    seen = set()
    pts = P.triples.triples
    for img in permutations(range(n), P.num_vertices):
        cm = 0
        for t in pts:
            cm |= 1 << index[tuple(sorted(img[v] for v in t))]
        if cm in seen:
            continue
        seen.add(cm)
        c = np.uint64(cm)
        ok &= (masks & c) != c
    sizes = np.zeros(1 << N, dtype=np.int64)
    for i in range(N):
        sizes += ((masks >> np.uint64(i)) & np.uint64(1)).astype(np.int64)
    sizes[~ok] = -1
    best = int(sizes.max())
    return best, [int(x) for x in np.nonzero(sizes == best)[0]]


def brute_arrows(P: PathPattern, k: int, n: int) -> bool:
    """Every k-coloring of the triples of [n] has a monochromatic copy of P."""
    triples = list(colex_triples(n))
    for cols in product(range(k), repeat=len(triples)):
        classes = [[t for t, c in zip(triples, cols) if c == col] for col in range(k)]
        if not any(brute_contains(cl, n, P) for cl in classes):
            return False
    return True


def naive_triangles(D: Digraph) -> int:
    count = 0
    for x, y, z in combinations(range(D.n), 3):
        a = D.arcs
        if ((x, y) in a and (y, z) in a and (z, x) in a) or ((x, z) in a and (z, y) in a and (y, x) in a):
            count += 1
    return count


# -- random instances ----------------------------------------------------


def random_hypergraph(rng: random.Random, n: int, p: float) -> Hypergraph3:
    return Hypergraph3(n, (t for t in combinations(range(n), 3) if rng.random() < p))


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, (e for e in combinations(range(n), 2) if rng.random() < p))


def random_oriented(rng: random.Random, n: int, min_in: int) -> Digraph:
    """Random oriented graph with every in-degree at least ``min_in``.

    Starts from a random tournament, flips arcs toward vertices below the
    target, then deletes random arcs that keep the target.
    """
    if 2 * min_in > n - 1:
        raise ValueError("min in-degree too large for an oriented graph")
    arcs = set()
    for u, v in combinations(range(n), 2):
        arcs.add((u, v) if rng.random() < 0.5 else (v, u))
    indeg = [0] * n
    for _, v in arcs:
        indeg[v] += 1
    for _ in range(50 * n * n):
        poor = [v for v in range(n) if indeg[v] < min_in]
        if not poor:
            break
        v = rng.choice(poor)
        # flip an arc v->w whose head can spare an in-arc
        options = [w for w in range(n) if (v, w) in arcs and indeg[w] > min_in]
        if not options:
            options = [w for w in range(n) if (v, w) in arcs]
        w = rng.choice(options)
        arcs.discard((v, w))
        arcs.add((w, v))
        indeg[w] -= 1
        indeg[v] += 1
    else:
        raise RuntimeError("could not reach the in-degree target")
    order = list(arcs)
    rng.shuffle(order)
    for u, v in order:
        if indeg[v] > min_in and rng.random() < 0.5:
            arcs.discard((u, v))
            indeg[v] -= 1
    return Digraph(n, arcs)


def _template(kind: str, rng: random.Random, m: int, budget: int):
    """Random planted structure at threshold m with at most ``budget`` vertices."""
    for _ in range(100):
        stars = rng.randint(1, 4)
        least = max(m + 1, 8) if kind == "loose" else m + 1
        sizes = tuple(rng.randint(least, least + 3) for _ in range(stars))
        locked = 0
        steiner = 0
        if kind == "loose" and stars >= m and rng.random() < 0.7:
            locked = rng.randint(1, 2)
        if kind == "messy" and rng.random() < 0.5:
            steiner = rng.choice((2 * m + 1, 2 * m + 3, 2 * m + 4, 2 * m + 5))
        size = stars + sum(sizes) + 2 * locked + steiner
        if size > budget:
            continue
        p = GeneratorParams(
            num_stars=stars,
            star_sizes=sizes,
            num_locked_pairs=locked,
            steiner_vertices=steiner,
            centers_in_steiner=steiner > 0 and rng.random() < 0.5,
            star_density=rng.choice((1.0, 0.8)),
            threshold=m,
            seed=rng.randrange(1 << 30),
            shuffle=False,
        )
        return generate_free(kind, p)
    raise RuntimeError("no template fits")


def structured_coloring(kind: str, n: int, seed: int, m: int = 4, planted: int = 6) -> tuple[Coloring, int]:
    """A coloring whose first colors are disjoint planted path-free structures.

    Remaining triples are packed greedily into matchings (disjoint
    triples), one color per matching, so those classes have empty cores.
    Returns the coloring and the number of planted colors.
    """
    rng = random.Random(seed)
    owner: dict[tuple, int] = {}
    colors = 0
    attempts = 0
    while colors < planted and attempts < 50 * planted:
        attempts += 1
        H, _ = _template(kind, rng, m, n)
        img = rng.sample(range(n), H.n)
        mapped = [tuple(sorted(img[v] for v in t)) for t in H.triples]
        if any(t in owner for t in mapped):
            continue
        for t in mapped:
            owner[t] = colors
        colors += 1
    planted_colors = colors
    rest = [t for t in colex_triples(n) if t not in owner]
    rng.shuffle(rest)
    while rest:
        used: set[int] = set()
        left = []
        for t in rest:
            if used.isdisjoint(t):
                owner[t] = colors
                used.update(t)
            else:
                left.append(t)
        rest = left
        colors += 1
    cols = [0] * comb(n, 3)
    for t, c in owner.items():
        cols[colex_rank(t)] = c
    return Coloring(n, max(colors, 1), tuple(cols)), planted_colors


def inject_path(H: Hypergraph3, P: PathPattern, rng: random.Random, m: int) -> Hypergraph3:
    """Add a copy of ``P`` on random vertices of degree at least ``m``.

    Adding triples never lowers a degree, so the copy sits inside the new
    ``m``-core.
    """
    heavy = [v for v in range(H.n) if H.degree(v) >= m]
    img = rng.sample(heavy, P.num_vertices)
    new = {tuple(sorted(img[v] for v in t)) for t in P.triples.triples}
    return Hypergraph3(H.n, set(H.triples) | new)


def loose_params(rng: random.Random, max_n: int = 120, m: int = 22, wide: bool = False) -> GeneratorParams:
    """``wide`` draws bodies up to the whole vertex budget."""
    while True:
        stars = rng.randint(1, 4)
        top = max_n // stars - 1 if wide else m + 12
        sizes = tuple(rng.randint(m + 1, max(top, m + 1)) for _ in range(stars))
        if stars + sum(sizes) <= max_n:
            break
    return GeneratorParams(
        num_stars=stars, star_sizes=sizes, star_density=rng.choice((1.0, 0.9, 0.75)),
        threshold=m, seed=rng.randrange(1 << 30),
    )


def messy_params(rng: random.Random, max_n: int = 120, m: int = 13, wide: bool = False) -> GeneratorParams:
    while True:
        stars = rng.randint(0, 4)
        top = max_n // max(stars, 1) - 1 if wide else m + 10
        sizes = tuple(rng.randint(m + 1, max(top, m + 1)) for _ in range(stars))
        steiner = rng.choice((0, rng.randint(2 * m + 1, 2 * m + 20)))
        if stars + steiner == 0:
            continue
        if steiner and -(-steiner * m // 3) > packing_number(steiner):
            continue
        if stars + sum(sizes) + steiner <= max_n:
            break
    return GeneratorParams(
        num_stars=stars, star_sizes=sizes, steiner_vertices=steiner,
        centers_in_steiner=bool(steiner and stars and rng.random() < 0.5),
        star_density=rng.choice((1.0, 0.9, 0.75)), threshold=m, seed=rng.randrange(1 << 30),
    )


def loose_locked_params(rng: random.Random, m: int = 6) -> GeneratorParams:
    """Loose instance with locked pairs; needs at least m centers, so a low threshold."""
    stars = rng.randint(m, m + 2)
    least = max(m + 1, 8)
    sizes = tuple(rng.randint(least, least + 2) for _ in range(stars))
    return GeneratorParams(
        num_stars=stars, star_sizes=sizes, num_locked_pairs=rng.randint(1, 3),
        star_density=rng.choice((1.0, 0.9)), threshold=m, seed=rng.randrange(1 << 30),
    )


# filled by the acceptance tests, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []
