"""Star/locked-pair decompositions of loose- and messy-path-free cores.

``decompose_loose`` and ``decompose_messy`` compute the vertex partition
of a path-free hypergraph's core. Every step at which a path-free core
is forced to look a certain way is checked; if the input breaks one of
those steps the function raises :class:`StructureViolation` with a
witness instead of returning a partition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Union

from .graphs import (
    capped_matching_number,
    connected_components,
    min_vertex_cover_size,
    star_center,
)
from .hypergraph import Hypergraph3, Pair, Triple, induced, m_core, trace_vertex

LOOSE_THRESHOLD = 22
MESSY_THRESHOLD = 13


class StructureViolation(Exception):
    """A core that cannot come from a path-free hypergraph.

    ``witness`` holds the offending vertex, triple or triples; ``color`` is
    filled in when the violation comes from one color class of a coloring.
    """

    def __init__(self, reason: str, witness=None, color: int | None = None):
        self.reason = reason
        self.witness = witness
        self.color = color
        msg = reason if witness is None else f"{reason} (witness: {witness})"
        if color is not None:
            msg = f"color {color}: {msg}"
        super().__init__(msg)

    def with_color(self, color: int) -> "StructureViolation":
        return StructureViolation(self.reason, self.witness, color)


class InfeasibleParams(ValueError):
    pass


def _frozen_map(A: Mapping[int, frozenset[int]]) -> dict[int, frozenset[int]]:
    return {int(y): frozenset(A[y]) for y in sorted(A)}


@dataclass(frozen=True, eq=True)
class LooseDecomposition:
    threshold: int
    core: Hypergraph3
    stray: frozenset[Triple]
    X: frozenset[int]
    locked_pairs: tuple[Pair, ...]
    Y: frozenset[int]
    A: dict[int, frozenset[int]] = field(hash=False)
    Z: frozenset[int]

    kind = "loose"

    def star_of(self) -> dict[int, int]:
        """Z-vertex -> the Y-vertex whose body holds it."""
        return {z: y for y, body in self.A.items() for z in body}

    def partner_of(self) -> dict[int, int]:
        out = {}
        for a, b in self.locked_pairs:
            out[a], out[b] = b, a
        return out


@dataclass(frozen=True, eq=True)
class MessyDecomposition:
    threshold: int
    core: Hypergraph3
    stray: frozenset[Triple]
    X: frozenset[int]
    Y: frozenset[int]
    A: dict[int, frozenset[int]] = field(hash=False)
    Z: frozenset[int]
    steiner: Hypergraph3

    kind = "messy"

    def star_of(self) -> dict[int, int]:
        return {z: y for y, body in self.A.items() for z in body}

    def steiner_vertices(self) -> frozenset[int]:
        """Vertices of X u Y incident to at least one Steiner triple."""
        return self.steiner.support()


Decomposition = Union[LooseDecomposition, MessyDecomposition]


def _empty_loose(H: Hypergraph3, m: int, core, stray) -> LooseDecomposition:
    return LooseDecomposition(m, core, stray, frozenset(), (), frozenset(), {}, frozenset())


# -- loose ---------------------------------------------------------------


def decompose_loose(H: Hypergraph3, threshold: int = LOOSE_THRESHOLD) -> LooseDecomposition:
    """X/Y/Z partition of the ``threshold``-core of a loose-path-free ``H``.

    Y: trace matching number at least 4. A_y: union of the components of
    Tr(y) with more than ``threshold`` vertices. X: the rest, split into
    locked pairs whose traces are reciprocal stars.
    """
    m = threshold
    res = m_core(H, m)
    core, stray = res.core, res.stray
    support = sorted(core.support())
    if not support:
        return _empty_loose(H, m, core, stray)

    traces = {v: trace_vertex(core, v) for v in support}
    Y = set()
    for v in support:
        nu = capped_matching_number(traces[v], 4)
        if nu in (2, 3):
            raise StructureViolation(f"trace matching number of {v} is {nu}", v)
        if nu >= 4:
            Y.add(v)

    A: dict[int, frozenset[int]] = {}
    owner: dict[int, int] = {}
    for y in sorted(Y):
        body: set[int] = set()
        for comp in connected_components(traces[y]):
            if len(comp) > m:
                body |= comp
            elif len(comp) > 2:
                raise StructureViolation(
                    f"trace of {y} has a component of size {len(comp)}", (y, tuple(sorted(comp)))
                )
        for z in body:
            if z in Y:
                raise StructureViolation(f"vertex {z} of Y lies in the body of {y}", (y, z))
            if z in owner:
                raise StructureViolation(f"vertex {z} lies in the bodies of {owner[z]} and {y}", z)
            owner[z] = y
        A[y] = frozenset(body)
    Z = set(owner)
    X = set(support) - Y - Z

    partner: dict[int, int] = {}
    for x in sorted(X):
        tr = traces[x]
        c = star_center(tr)
        if c is None or len(tr.edges) < m:
            raise StructureViolation(f"trace of {x} is not a star with at least {m} edges", x)
        if len(tr.edges) == 1:
            # single-edge trace: both ends are centers, prefer one in X
            a, b = next(iter(tr.edges))
            c = a if a in X else b
        partner[x] = c
    for x, c in partner.items():
        if c not in X or partner.get(c) != x:
            raise StructureViolation(f"star center {c} of {x} does not reciprocate", (x, c))
    locked = tuple(sorted({(min(x, c), max(x, c)) for x, c in partner.items()}))

    d = LooseDecomposition(m, core, stray, frozenset(X), locked, frozenset(Y), A, frozenset(Z))
    report = verify_decomposition(d)
    if not report.ok:
        raise StructureViolation(report.message, report.witness)
    return d


# -- messy ---------------------------------------------------------------


def decompose_messy(H: Hypergraph3, threshold: int = MESSY_THRESHOLD) -> MessyDecomposition:
    """X/Y/Z partition of the ``threshold``-core of a messy-path-free ``H``.

    Z: trace cover number 1. Y: the star centers of Z-vertices, each with
    cover number at least 4. X: the rest. X u Y spans a partial Steiner
    triple system.
    """
    m = threshold
    res = m_core(H, m)
    core, stray = res.core, res.stray
    support = sorted(core.support())
    traces = {v: trace_vertex(core, v) for v in support}
    tau = {}
    for v in support:
        t = min_vertex_cover_size(traces[v], cap=4)
        if t in (2, 3):
            raise StructureViolation(f"trace cover number of {v} is {t}", v)
        tau[v] = t

    center = {}
    for z in support:
        if tau[z] == 1:
            c = star_center(traces[z])
            if len(traces[z].edges) == 1:
                a, b = next(iter(traces[z].edges))
                c = a if tau.get(a, 0) >= 4 else b
            center[z] = c
    for z, y in center.items():
        if tau.get(y, 0) < 4:
            raise StructureViolation(f"star center {y} of {z} has trace cover number {tau.get(y)}", (z, y))

    Z = frozenset(center)
    Y = frozenset(center.values())
    A = {y: frozenset(z for z, c in center.items() if c == y) for y in sorted(Y)}
    X = frozenset(support) - Y - Z
    steiner = induced(core, X | Y)
    for pair, thirds in steiner.pair_index.items():
        if len(thirds) > 1:
            kite = [tuple(sorted(pair + (w,))) for w in thirds[:2]]
            raise StructureViolation("kite inside the Steiner part", tuple(kite))

    d = MessyDecomposition(m, core, stray, X, Y, A, Z, steiner)
    report = verify_decomposition(d)
    if not report.ok:
        raise StructureViolation(report.message, report.witness)
    return d


def decompose(H: Hypergraph3, kind: str, threshold: int | None = None) -> Decomposition:
    if kind == "loose":
        return decompose_loose(H, LOOSE_THRESHOLD if threshold is None else threshold)
    if kind == "messy":
        return decompose_messy(H, MESSY_THRESHOLD if threshold is None else threshold)
    raise ValueError(f"unknown decomposition kind {kind!r}")


# -- verification --------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    message: str = "ok"
    witness: object = None


def _fail(message: str, witness=None) -> VerificationReport:
    return VerificationReport(False, message, witness)


def _check_partition(d: Decomposition) -> VerificationReport | None:
    support = d.core.support()
    X, Y, Z = d.X, d.Y, d.Z
    for name, a, b in (("X", X, Y), ("X", X, Z), ("Y", Y, Z)):
        common = a & b
        if common:
            other = "Y" if b is Y else "Z"
            return _fail(f"{name} and {other} overlap", min(common))
    union = X | Y | Z
    if union != support:
        extra = union - support
        if extra:
            return _fail("partition holds a vertex of zero core degree", min(extra))
        return _fail("core vertex missing from the partition", min(support - union))
    if set(d.A) - Y:
        return _fail("star body keyed by a vertex outside Y", min(set(d.A) - Y))
    seen: dict[int, int] = {}
    for y, body in d.A.items():
        for z in body:
            if z in seen:
                return _fail(f"vertex in the bodies of {seen[z]} and {y}", z)
            seen[z] = y
    if set(seen) != Z:
        diff = set(seen) ^ Z
        return _fail("star bodies do not partition Z", min(diff))
    return None


def _check_degrees(d: Decomposition) -> VerificationReport | None:
    for v in sorted(d.core.support()):
        if d.core.degree(v) < d.threshold:
            return _fail(f"core vertex of degree below {d.threshold}", v)
    if d.stray & d.core.triple_set:
        return _fail("triple both stray and in the core", min(d.stray & d.core.triple_set))
    return None


def verify_decomposition(d: Decomposition) -> VerificationReport:
    """Check every structural invariant; report the first violation."""
    for check in (_check_degrees, _check_partition):
        r = check(d)
        if r is not None:
            return r
    star_of = d.star_of()

    def star_form(e: Triple) -> bool:
        ys = [v for v in e if v in d.Y]
        if len(ys) != 1:
            return False
        y = ys[0]
        return all(star_of.get(v) == y for v in e if v != y)

    if isinstance(d, LooseDecomposition):
        pairs = d.locked_pairs
        flat = [v for p in pairs for v in p]
        if len(set(flat)) != len(flat) or set(flat) != set(d.X):
            return _fail("locked pairs do not partition X", tuple(pairs))
        for y, body in d.A.items():
            if body and len(body) <= d.threshold:
                return _fail(f"star body of {y} has only {len(body)} vertices", y)
        partner = d.partner_of()
        for e in d.core.triples:
            xs = [v for v in e if v in d.X]
            ys = [v for v in e if v in d.Y]
            locked_form = len(xs) == 2 and partner[xs[0]] == xs[1] and len(ys) == 1
            if locked_form == star_form(e):
                return _fail("triple fits neither or both triple forms", e)
        return VerificationReport(True)

    XY = d.X | d.Y
    if d.steiner != induced(d.core, XY):
        return _fail("steiner part differs from the core induced on X u Y")
    for pair, thirds in d.steiner.pair_index.items():
        if len(thirds) > 1:
            return _fail("pair of codegree above 1 in the Steiner part", tuple(sorted(pair + (thirds[0],))))
    for e in d.core.triples:
        inside = all(v in XY for v in e)
        if inside == star_form(e):
            return _fail("triple fits neither or both triple forms", e)
    return VerificationReport(True)


# -- generators ----------------------------------------------------------


@dataclass(frozen=True)
class GeneratorParams:
    num_stars: int = 0
    star_sizes: tuple[int, ...] = ()
    num_locked_pairs: int = 0
    steiner_vertices: int = 0
    steiner_triples: int | None = None
    centers_in_steiner: bool = False
    star_density: float = 1.0
    locked_pair_reach: int | None = None
    threshold: int | None = None
    seed: int = 0
    retries: int = 100
    shuffle: bool = True


def _star_body_pairs(body: list[int], density: float, m: int, rng: random.Random) -> list[Pair]:
    """Complete graph on ``body`` thinned towards ``density``.

    A pair is dropped only while both ends keep degree at least ``m``, so
    the result always survives the core.
    """
    pairs = list(combinations(body, 2))
    if density >= 1.0:
        return pairs
    deg = dict.fromkeys(body, len(body) - 1)
    rng.shuffle(pairs)
    kept = []
    for a, b in pairs:
        if rng.random() >= density and deg[a] > m and deg[b] > m:
            deg[a] -= 1
            deg[b] -= 1
        else:
            kept.append((a, b))
    return sorted(kept)


def _relabel_truth(d: Decomposition, perm: list[int]) -> Decomposition:
    core = d.core.relabel(perm)
    stray = frozenset(tuple(sorted(perm[v] for v in t)) for t in d.stray)
    X = frozenset(perm[v] for v in d.X)
    Y = frozenset(perm[v] for v in d.Y)
    Z = frozenset(perm[v] for v in d.Z)
    A = _frozen_map({perm[y]: frozenset(perm[z] for z in b) for y, b in d.A.items()})
    if isinstance(d, LooseDecomposition):
        locked = tuple(sorted((min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in d.locked_pairs))
        return LooseDecomposition(d.threshold, core, stray, X, locked, Y, A, Z)
    return MessyDecomposition(d.threshold, core, stray, X, Y, A, Z, d.steiner.relabel(perm))


def _check_star_sizes(p: GeneratorParams, m: int, kind: str) -> list[int]:
    # centers need trace matching number (loose) or cover number (messy)
    # at least 4; a body of min degree m gives that once these hold
    if m < 4:
        raise InfeasibleParams("generators need a threshold of at least 4")
    least = max(m + 1, 8) if kind == "loose" else m + 1
    sizes = list(p.star_sizes) if p.star_sizes else [least] * p.num_stars
    if len(sizes) != p.num_stars:
        raise InfeasibleParams("star_sizes must list one size per star")
    for s in sizes:
        if s <= m:
            raise InfeasibleParams(f"star body of {s} vertices cannot survive the {m}-core")
        if s < least:
            raise InfeasibleParams(f"star body of {s} vertices has trace matching number below 4")
    if not 0 < p.star_density <= 1:
        raise InfeasibleParams("star_density must lie in (0, 1]")
    return sizes


def generate_loose_free(p: GeneratorParams) -> tuple[Hypergraph3, LooseDecomposition]:
    """A hypergraph with the loose-path-free core structure and its partition.

    Vertices are laid out as centers, bodies, locked pairs and then
    shuffled (unless ``shuffle`` is off). Each locked pair is joined to
    ``locked_pair_reach`` centers (default: all of them).
    """
    m = p.threshold or LOOSE_THRESHOLD
    sizes = _check_star_sizes(p, m, "loose")
    if p.num_locked_pairs and p.num_stars < m:
        raise InfeasibleParams(f"locked pairs need at least {m} star centers, got {p.num_stars}")
    reach = p.locked_pair_reach or p.num_stars
    if p.num_locked_pairs and not m <= reach <= p.num_stars:
        raise InfeasibleParams(f"locked_pair_reach must lie in [{m}, {p.num_stars}]")
    rng = random.Random(p.seed)

    centers = list(range(p.num_stars))
    nxt = p.num_stars
    triples: list[Triple] = []
    A: dict[int, frozenset[int]] = {}
    for y, size in zip(centers, sizes):
        body = list(range(nxt, nxt + size))
        nxt += size
        A[y] = frozenset(body)
        triples.extend((y, a, b) for a, b in _star_body_pairs(body, p.star_density, m, rng))
    locked = []
    for _ in range(p.num_locked_pairs):
        x, x2 = nxt, nxt + 1
        nxt += 2
        locked.append((x, x2))
        for y in sorted(rng.sample(centers, reach)):
            triples.append((y, x, x2))
    n = nxt
    H = Hypergraph3(n, triples)
    X = frozenset(v for pr in locked for v in pr)
    truth = LooseDecomposition(
        m, H, frozenset(), X, tuple(locked), frozenset(centers), A, frozenset().union(*A.values())
    )
    if p.shuffle and n:
        perm = list(range(n))
        rng.shuffle(perm)
        return H.relabel(perm), _relabel_truth(truth, perm)  # type: ignore[return-value]
    return H, truth


def packing_number(v: int) -> int:
    """Maximum number of triples with pairwise codegree at most 1 on ``v`` vertices."""
    if v < 3:
        return 0
    d = (v * ((v - 1) // 2)) // 3
    return d - 1 if v % 6 == 5 else d


def greedy_partial_steiner(
    vertices: list[int],
    min_degree: int,
    rng: random.Random,
    target_triples: int | None = None,
    required: list[int] | None = None,
    max_steps: int | None = None,
) -> list[Triple]:
    """Codegree-at-most-1 triples on ``vertices`` by greedy insertion.

    Inserts a triple through a deficient vertex whenever its two pairs to
    the chosen partners are free; if the partners' own pair is taken, the
    blocking triple is swapped out (hill-climbing repair). Stops once every
    ``required`` vertex has degree ``min_degree`` and ``target_triples`` is met.
    """
    req = list(vertices if required is None else required)
    deg = dict.fromkeys(vertices, 0)
    block_of: dict[Pair, Triple] = {}
    blocks: set[Triple] = set()
    max_steps = max_steps or 200 * len(vertices) ** 2
    vset = list(vertices)

    def free_partners(x: int) -> list[int]:
        return [y for y in vset if y != x and (min(x, y), max(x, y)) not in block_of]

    def add(t: Triple) -> None:
        blocks.add(t)
        for a, b in combinations(t, 2):
            block_of[(a, b)] = t
        for v in t:
            deg[v] += 1

    def drop(t: Triple) -> None:
        blocks.discard(t)
        for a, b in combinations(t, 2):
            del block_of[(a, b)]
        for v in t:
            deg[v] -= 1

    for _ in range(max_steps):
        live = [x for x in req if deg[x] < min_degree]
        if not live:
            if target_triples is None or len(blocks) >= target_triples:
                break
            live = [x for x in vset if len(free_partners(x)) >= 2]
            if not live:
                break
        x = rng.choice(live)
        partners = free_partners(x)
        if len(partners) < 2:
            return sorted(blocks)  # x is saturated; caller sees the shortfall
        y, z = rng.sample(partners, 2)
        yz = (min(y, z), max(y, z))
        if yz in block_of:
            drop(block_of[yz])
        add(tuple(sorted((x, y, z))))
    return sorted(blocks)


def generate_messy_free(p: GeneratorParams) -> tuple[Hypergraph3, MessyDecomposition]:
    """A hypergraph with the messy-path-free core structure and its partition.

    Stars as in the loose case; ``steiner_vertices`` fresh vertices carry a
    partial Steiner system in which each has degree at least the threshold.
    With ``centers_in_steiner`` the star centers join the Steiner vertex set.
    """
    m = p.threshold or MESSY_THRESHOLD
    sizes = _check_star_sizes(p, m, "messy")
    if p.num_locked_pairs:
        raise InfeasibleParams("messy structures have no locked pairs")
    if p.steiner_vertices and p.steiner_vertices < 2 * m + 1:
        raise InfeasibleParams(
            f"a partial Steiner system needs at least {2 * m + 1} vertices for min degree {m}"
        )
    if p.steiner_vertices and not p.centers_in_steiner:
        v = p.steiner_vertices
        if -(-v * m // 3) > packing_number(v):
            raise InfeasibleParams(
                f"no partial Steiner system on {v} vertices has min degree {m}"
            )
    rng = random.Random(p.seed)

    centers = list(range(p.num_stars))
    nxt = p.num_stars
    triples: list[Triple] = []
    A: dict[int, frozenset[int]] = {}
    for y, size in zip(centers, sizes):
        body = list(range(nxt, nxt + size))
        nxt += size
        A[y] = frozenset(body)
        triples.extend((y, a, b) for a, b in _star_body_pairs(body, p.star_density, m, rng))
    xs = list(range(nxt, nxt + p.steiner_vertices))
    nxt += p.steiner_vertices
    sts: list[Triple] = []
    if xs:
        pool = xs + (centers if p.centers_in_steiner else [])
        for _ in range(p.retries):
            sts = greedy_partial_steiner(pool, m, rng, p.steiner_triples, required=xs)
            deg = dict.fromkeys(xs, 0)
            for t in sts:
                for v in t:
                    if v in deg:
                        deg[v] += 1
            if min(deg.values()) >= m and (p.steiner_triples is None or len(sts) >= p.steiner_triples):
                break
        else:
            raise InfeasibleParams("could not build the Steiner part within the retry budget")
    triples.extend(sts)
    n = nxt
    H = Hypergraph3(n, triples)
    X = frozenset(xs)
    Y = frozenset(centers)
    truth = MessyDecomposition(
        m, H, frozenset(), X, Y, A, frozenset().union(*A.values()), induced(H, X | Y)
    )
    if p.shuffle and n:
        perm = list(range(n))
        rng.shuffle(perm)
        return H.relabel(perm), _relabel_truth(truth, perm)  # type: ignore[return-value]
    return H, truth


def generate_free(kind: str, p: GeneratorParams):
    if kind == "loose":
        return generate_loose_free(p)
    if kind == "messy":
        return generate_messy_free(p)
    raise ValueError(f"unknown kind {kind!r}")


def star_hypergraph(n: int) -> Hypergraph3:
    """All triples through vertex 0."""
    if n < 3:
        raise ValueError("a star needs at least 3 vertices")
    return Hypergraph3(n, ((0, a, b) for a, b in combinations(range(1, n), 2)))


# -- report --------------------------------------------------------------


def _ids(vs) -> str:
    return " ".join(str(v) for v in sorted(vs)) or "-"


def format_decomposition(d: Decomposition) -> str:
    lines = [
        f"kind: {d.kind}",
        f"threshold: {d.threshold}",
        f"core_triples: {len(d.core)}",
        f"stray_count: {len(d.stray)}",
        f"X: {_ids(d.X)}",
    ]
    if isinstance(d, LooseDecomposition):
        lines.append("locked_pairs: " + (" ".join(f"{a}-{b}" for a, b in d.locked_pairs) or "-"))
    lines.append(f"Y: {_ids(d.Y)}")
    for y in sorted(d.A):
        lines.append(f"A[{y}]: {_ids(d.A[y])}")
    if isinstance(d, MessyDecomposition):
        lines.append(f"steiner_triples: {len(d.steiner)}")
    return "\n".join(lines) + "\n"


def same_partition(a: Decomposition, b: Decomposition) -> bool:
    """Equal partitions (cores, X, Y, Z, bodies and locked pairs)."""
    if type(a) is not type(b):
        return False
    base = (
        a.core.triple_set == b.core.triple_set
        and a.X == b.X
        and a.Y == b.Y
        and a.Z == b.Z
        and {y: s for y, s in a.A.items() if s} == {y: s for y, s in b.A.items() if s}
    )
    if isinstance(a, LooseDecomposition):
        return base and set(a.locked_pairs) == set(b.locked_pairs)
    return base
