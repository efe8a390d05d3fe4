"""Exact extremal numbers ex(n, P) for small n by branch-and-bound."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb

from .coloring import colex_triples
from .hypergraph import Hypergraph3, Triple
from .patterns import PathPattern, PatternName, copies_in_complete, pattern


@dataclass(frozen=True)
class ExtremalResult:
    """``value`` is exact unless ``exact`` is False (then a lower bound)."""

    n: int
    pattern: PathPattern
    value: int
    witnesses: tuple[Hypergraph3, ...]
    exact: bool
    nodes: int = 0
    elapsed_s: float = 0.0
    classes: tuple[str, ...] = field(default=())


class _Problem:
    def __init__(self, P: PathPattern, n: int):
        self.n = n
        self.triples = list(colex_triples(n))
        self.N = len(self.triples)
        index = {t: i for i, t in enumerate(self.triples)}
        self.through: list[list[int]] = [[] for _ in range(self.N)]
        for mask in copies_in_complete(P, n, index) if P.num_vertices <= n else ():
            m = mask
            while m:
                low = m & -m
                self.through[low.bit_length() - 1].append(mask ^ low)
                m ^= low

    def hypergraph(self, mask: int) -> Hypergraph3:
        return Hypergraph3(self.n, (t for i, t in enumerate(self.triples) if mask >> i & 1))


class _Search:
    """Include-first DFS; a triple is dead once adding it would complete a copy."""

    def __init__(self, prob: _Problem, best: int, collect: bool, deadline: float | None):
        self.prob = prob
        self.best = best
        self.collect = collect
        self.deadline = deadline
        self.found: list[int] = []
        self.nodes = 0
        self.timed_out = False

    def run(self, i: int = 0, cur: int = 0, count: int = 0, dead: int = 0) -> None:
        N = self.prob.N
        full = (1 << N) - 1
        through = self.prob.through
        stack = [(i, cur, count, dead)]
        while stack:
            i, cur, count, dead = stack.pop()
            self.nodes += 1
            if self.deadline is not None and self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
                self.timed_out = True
                return
            remaining = full & ~((1 << i) - 1) & ~dead
            bound = count + remaining.bit_count()
            if bound < self.best or (bound == self.best and not self.collect and self.found):
                continue
            # skip ahead to the next viable triple
            if remaining == 0:
                self._record(cur, count)
                continue
            j = (remaining & -remaining).bit_length() - 1
            # exclude branch (pushed first, popped second)
            stack.append((j + 1, cur, count, dead))
            new_dead = dead
            ncur = cur | 1 << j
            for rest in through[j]:
                left = rest & ~ncur
                if left and left & (left - 1) == 0:
                    new_dead |= left
            stack.append((j + 1, ncur, count + 1, new_dead))

    def _record(self, cur: int, count: int) -> None:
        if count > self.best or not self.found:
            self.best = count
            self.found = [cur]
        elif count == self.best and self.collect:
            self.found.append(cur)


def _canonical(n: int, triples: list[Triple]) -> tuple[Triple, ...]:
    """Lexicographically least sorted triple list over all relabelings."""
    best = None
    for perm in permutations(range(n)):
        img = tuple(sorted(tuple(sorted((perm[a], perm[b], perm[c]))) for a, b, c in triples))
        if best is None or img < best:
            best = img
    return best


def canonical_form(H: Hypergraph3) -> tuple[Triple, ...]:
    return _canonical(H.n, list(H.triples))


def classify_witness(H: Hypergraph3) -> str:
    """``star``: all triples through one vertex (on all n vertices);
    ``complete<s>``: all triples of an s-vertex set; else ``other``."""
    n = H.n
    if n >= 3 and len(H) == comb(n - 1, 2):
        for v in range(n):
            if H.degree(v) == len(H):
                return "star"
    sup = H.support()
    if len(sup) >= 3 and len(H) == comb(len(sup), 3):
        return f"complete{len(sup)}"
    return "other"


def _subtree(args):
    P, n, prefix_i, cur, count, dead, best, collect, deadline = args
    prob = _Problem(P, n)
    s = _Search(prob, best, collect, deadline)
    s.run(prefix_i, cur, count, dead)
    return s.best, s.found, s.nodes, s.timed_out


def extremal_number(
    P: PathPattern,
    n: int,
    budget_ms: int | None = None,
    collect_witnesses: bool = False,
    jobs: int = 1,
) -> ExtremalResult:
    """Maximum number of triples of a ``P``-free hypergraph on ``n`` vertices.

    With ``collect_witnesses`` every labeled optimum is found and the
    witnesses are returned one per isomorphism class.
    """
    start = time.monotonic()
    deadline = None if budget_ms is None else start + budget_ms / 1000
    prob = _Problem(P, n)
    # greedy pass gives a lower bound to prune with
    cur = dead = 0
    for j in range(prob.N):
        if not dead >> j & 1:
            cur |= 1 << j
            for rest in prob.through[j]:
                left = rest & ~cur
                if left and left & (left - 1) == 0:
                    dead |= left
    seed = cur.bit_count()

    if jobs > 1 and prob.N > 4:
        # split on the first few include/exclude decisions
        frontier = [(0, 0, 0, 0)]
        for _ in range(4):
            nxt = []
            for i, c, cnt, d in frontier:
                if i >= prob.N:
                    nxt.append((i, c, cnt, d))
                    continue
                nxt.append((i + 1, c, cnt, d | (1 << i)))
                if not d >> i & 1:
                    nc = c | 1 << i
                    nd = d
                    for rest in prob.through[i]:
                        left = rest & ~nc
                        if left and left & (left - 1) == 0:
                            nd |= left
                    nxt.append((i + 1, nc, cnt + 1, nd))
            frontier = nxt
        tasks = [(P, n, i, c, cnt, d, seed, collect_witnesses, deadline) for i, c, cnt, d in frontier]
        best, found, nodes, timed_out = seed, [cur], 0, False
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for b, f, nd, to in pool.map(_subtree, tasks):
                nodes += nd
                timed_out |= to
                if not f:
                    continue
                if b > best:
                    best, found = b, list(f)
                elif b == best:
                    found.extend(f)
    else:
        s = _Search(prob, seed, collect_witnesses, deadline)
        s.found = [] if collect_witnesses else [cur]
        s.run()
        best, found, nodes, timed_out = s.best, s.found, s.nodes, s.timed_out
        if not found:
            found = [cur]

    witnesses = []
    if collect_witnesses:
        seen = {}
        for mask in sorted(set(found)):
            H = prob.hypergraph(mask)
            key = canonical_form(H)
            if key not in seen:
                seen[key] = H
        witnesses = [seen[k] for k in sorted(seen)]
    else:
        witnesses = [prob.hypergraph(found[0])]
    witnesses = [w for w in witnesses if len(w) == best]
    return ExtremalResult(
        n, P, best, tuple(witnesses), not timed_out, nodes, time.monotonic() - start,
        tuple(classify_witness(w) for w in witnesses),
    )


def messy_formula(n: int) -> int:
    return comb(n, 3) if n <= 5 else comb(n - 1, 2)


def messy_expected_classes(n: int) -> tuple[str, ...]:
    """Extremal families up to isomorphism for the messy path."""
    if n <= 2:
        return ("other",)
    if n == 3:
        return ("star",)
    if n <= 5:
        return (f"complete{n}",)
    if n == 6:
        return ("complete5", "star")
    return ("star",)


@dataclass(frozen=True)
class MessyRow:
    n: int
    computed: int
    formula: int
    match: bool
    classes: tuple[str, ...]
    expected_classes: tuple[str, ...]
    classes_match: bool
    exact: bool
    elapsed_s: float


def verify_messy_extremal(n_max: int, n_min: int = 4, budget_ms: int | None = None, jobs: int = 1) -> list[MessyRow]:
    M = pattern(PatternName.MESSY)
    rows = []
    for n in range(n_min, n_max + 1):
        r = extremal_number(M, n, budget_ms, collect_witnesses=True, jobs=jobs)
        f = messy_formula(n)
        exp = messy_expected_classes(n)
        got = tuple(sorted(r.classes))
        rows.append(
            MessyRow(n, r.value, f, r.value == f, got, tuple(sorted(exp)), got == tuple(sorted(exp)),
                     r.exact, r.elapsed_s)
        )
    return rows


def format_messy_table(rows: list[MessyRow], fmt: str = "text") -> str:
    head = ("n", "ex", "formula", "match", "witness_classes", "expected_classes", "classes_match", "exact")
    body = [
        (str(r.n), str(r.computed), str(r.formula), str(r.match).lower(), ",".join(r.classes),
         ",".join(r.expected_classes), str(r.classes_match).lower(), str(r.exact).lower())
        for r in rows
    ]
    if fmt == "tsv":
        return "\n".join("\t".join(x) for x in [head, *body]) + "\n"
    widths = [max(len(row[i]) for row in [head, *body]) for i in range(len(head))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in [head, *body]) + "\n"


def is_intersecting(H: Hypergraph3) -> bool:
    sets = [set(t) for t in H.triples]
    return all(a & b for a, b in combinations(sets, 2))
