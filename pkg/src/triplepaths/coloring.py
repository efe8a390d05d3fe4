"""Colorings of all triples of ``[n]`` and tiny exact Ramsey search."""

from __future__ import annotations

import io
import time
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterator, Sequence, TextIO

from .hypergraph import Hypergraph3, Triple, make_triple
from .patterns import Embedding, PathPattern, contains_pattern, copies_in_complete, pattern


def colex_rank(t: Sequence[int]) -> int:
    a, b, c = sorted(t)
    return a + comb(b, 2) + comb(c, 3)


def colex_triples(n: int) -> Iterator[Triple]:
    """All triples of ``[n]`` in colex order (by ``c``, then ``b``, then ``a``)."""
    for c in range(n):
        for b in range(c):
            for a in range(b):
                yield (a, b, c)


class ColoringFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Coloring:
    """``colors[colex_rank(t)]`` is the color of triple ``t``."""

    n: int
    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one color")
        if len(self.colors) != comb(self.n, 3):
            raise ValueError(f"expected {comb(self.n, 3)} colors, got {len(self.colors)}")
        bad = next((c for c in self.colors if not 0 <= c < self.k), None)
        if bad is not None:
            raise ValueError(f"color {bad} out of range for k={self.k}")

    @classmethod
    def from_function(cls, n: int, k: int, fn) -> "Coloring":
        return cls(n, k, tuple(fn(t) for t in colex_triples(n)))

    def color_of(self, t: Sequence[int]) -> int:
        a, b, c = make_triple(*t)
        if c >= self.n:
            raise ValueError(f"triple {t} out of range")
        return self.colors[colex_rank((a, b, c))]

    @cached_property
    def classes(self) -> tuple[Hypergraph3, ...]:
        buckets: list[list[Triple]] = [[] for _ in range(self.k)]
        for t, c in zip(colex_triples(self.n), self.colors):
            buckets[c].append(t)
        return tuple(Hypergraph3(self.n, b) for b in buckets)

    def relabel(self, perm: Sequence[int]) -> "Coloring":
        """Coloring ``C'`` with ``C'(perm[t]) = C(t)``."""
        new = [0] * len(self.colors)
        for t, c in zip(colex_triples(self.n), self.colors):
            new[colex_rank([perm[v] for v in t])] = c
        return Coloring(self.n, self.k, tuple(new))


def lower_bound_coloring(kind: str, k: int) -> Coloring:
    """Star-chain construction on ``k+5`` (loose) or ``k+4`` (messy) vertices.

    With 1-based vertices ``v_1..v_n``, triple ``v_x v_y v_z`` (``x<y<z``)
    gets color ``x`` when ``x < k`` and color ``k`` otherwise; colors are
    shifted to ``0..k-1``. In 0-based ids: color = ``min(a, k-1)`` for the
    smallest vertex ``a``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if kind == "loose":
        n = k + 5
    elif kind == "messy":
        n = k + 4
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return Coloring.from_function(n, k, lambda t: min(t[0], k - 1))


def color_class(C: Coloring, c: int) -> Hypergraph3:
    if not 0 <= c < C.k:
        raise ValueError(f"color {c} out of range for k={C.k}")
    return C.classes[c]


def monochromatic_embedding(C: Coloring, P: PathPattern) -> tuple[int, Embedding] | None:
    for c in range(C.k):
        emb = contains_pattern(C.classes[c], P)
        if emb is not None:
            return c, emb
    return None


def kind_pattern(kind: str) -> PathPattern:
    return pattern(kind)


# -- file format ---------------------------------------------------------


def format_coloring(C: Coloring) -> str:
    out = [f"{C.n} {C.k}"]
    out.extend(f"{a} {b} {c} {col}" for (a, b, c), col in zip(colex_triples(C.n), C.colors))
    return "\n".join(out) + "\n"


def parse_coloring(text: str | TextIO) -> Coloring:
    """``n k`` then one ``a b c color`` line per triple, in colex order."""
    stream = io.StringIO(text) if isinstance(text, str) else text
    rows = [(i, ln.split()) for i, ln in enumerate(stream, start=1)]
    rows = [(i, p) for i, p in rows if p]
    if not rows:
        raise ColoringFormatError("empty input")
    lineno, header = rows[0]
    try:
        n, k = (int(x) for x in header)
    except ValueError:
        raise ColoringFormatError("header must be 'n k'", lineno) from None
    if n < 0 or k < 1:
        raise ColoringFormatError("need n >= 0 and k >= 1", lineno)
    body = rows[1:]
    expected = comb(n, 3)
    if len(body) != expected:
        raise ColoringFormatError(f"expected {expected} triple lines, found {len(body)}")
    colors = []
    for (lineno, parts), want in zip(body, colex_triples(n)):
        if len(parts) != 4:
            raise ColoringFormatError("expected 'a b c color'", lineno)
        try:
            a, b, c, col = (int(x) for x in parts)
        except ValueError:
            raise ColoringFormatError("fields must be integers", lineno) from None
        if (a, b, c) != want:
            raise ColoringFormatError(f"expected triple {want[0]} {want[1]} {want[2]} here (colex order)", lineno)
        if not 0 <= col < k:
            raise ColoringFormatError(f"color {col} out of range for k={k}", lineno)
        colors.append(col)
    return Coloring(n, k, tuple(colors))


def read_coloring(path) -> Coloring:
    with open(path, encoding="ascii") as fh:
        return parse_coloring(fh)


def write_coloring(C: Coloring, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_coloring(C))


# -- exact Ramsey search -------------------------------------------------


@dataclass(frozen=True)
class RamseyResult:
    """``arrow`` is True if every k-coloring of ``[n]`` has a monochromatic
    copy, False (with ``certificate``) if one avoids it, None if the
    budget ran out."""

    pattern: str
    k: int
    n: int
    arrow: bool | None
    certificate: Coloring | None
    nodes: int
    elapsed_s: float


def ramsey_exhaustive(P: PathPattern, k: int, n: int, budget_ms: int | None = None) -> RamseyResult:
    """Decide ``[n] -> (P)_k`` by backtracking over triples in colex order.

    Colors are interchangeable, so a triple may only take a color already
    used or the next unused one; in particular triple ``012`` (whose orbit
    under vertex permutations is every triple) is fixed to color 0.
    """
    start = time.monotonic()
    deadline = None if budget_ms is None else start + budget_ms / 1000
    triples = list(colex_triples(n))
    N = len(triples)
    if N == 0 or P.num_vertices > n:
        cert = Coloring(n, k, (0,) * N)
        return RamseyResult(P.label, k, n, False, cert, 0, time.monotonic() - start)

    index = {t: i for i, t in enumerate(triples)}
    through: list[list[int]] = [[] for _ in range(N)]
    for mask in copies_in_complete(P, n, index):
        bits = [i for i in range(N) if mask >> i & 1]
        # check a copy when its last triple (in search order) gets colored
        last = max(bits)
        through[last].append(mask & ~(1 << last))

    class_mask = [0] * k
    assign = [0] * N
    nodes = 0
    timed_out = False

    def rec(i: int, used: int) -> bool:
        nonlocal nodes, timed_out
        if i == N:
            return True
        nodes += 1
        if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            timed_out = True
            return False
        for c in range(min(used + 1, k)):
            cm = class_mask[c]
            if any(rest & cm == rest for rest in through[i]):
                continue
            class_mask[c] = cm | (1 << i)
            assign[i] = c
            if rec(i + 1, max(used, c + 1)):
                return True
            class_mask[c] = cm
            if timed_out:
                return False
        return False

    found = rec(0, 0)
    elapsed = time.monotonic() - start
    if found:
        return RamseyResult(P.label, k, n, False, Coloring(n, k, tuple(assign)), nodes, elapsed)
    if timed_out:
        return RamseyResult(P.label, k, n, None, None, nodes, elapsed)
    return RamseyResult(P.label, k, n, True, None, nodes, elapsed)


def ramsey_number(P: PathPattern, k: int, n_max: int, budget_ms: int | None = None) -> int | None:
    """Smallest ``n <= n_max`` with ``arrow``; None if undecided or larger."""
    for n in range(1, n_max + 1):
        r = ramsey_exhaustive(P, k, n, budget_ms)
        if r.arrow is None:
            return None
        if r.arrow:
            return n
    return None
