"""Colored multidigraph of a path-free coloring and its pair statistics.

For each color the class is decomposed; a vertex in the body of the star
centered at ``v`` gets an arc to ``v`` in that color, and (loose only)
each locked pair gets arcs both ways. Pairs of vertices are then tagged
two-cycle / parallel / solo / uncovered, and the counting identities that
hold for every such coloring are checked exactly.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .coloring import Coloring
from .graphs import Digraph, directed_triangle_census, is_oriented
from .hypergraph import Hypergraph3, Triple
from .structure import (
    LOOSE_THRESHOLD,
    MESSY_THRESHOLD,
    Decomposition,
    LooseDecomposition,
    MessyDecomposition,
    StructureViolation,
    decompose,
)

Arc = tuple[int, int, int]


@dataclass(frozen=True)
class ColoredMultidigraph:
    n: int
    k: int
    kind: str
    threshold: int
    arcs: frozenset[Arc]
    cores: tuple[frozenset[Triple], ...]
    strays: tuple[frozenset[Triple], ...]
    steiner_support: tuple[frozenset[int], ...]
    coloring: Coloring | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for name in ("cores", "strays", "steiner_support"):
            if len(getattr(self, name)) != self.k:
                raise ValueError(f"{name} needs one entry per color")
        out: dict[tuple[int, int], int] = {}
        for u, v, c in self.arcs:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n) or not 0 <= c < self.k:
                raise ValueError(f"bad arc {(u, v, c)}")
            if (u, c) in out:
                raise ValueError(f"vertex {u} has two out-arcs in color {c}")
            out[(u, c)] = v

    @property
    def stray_total(self) -> int:
        return sum(len(s) for s in self.strays)


def _decompose_color(args):
    H, kind, threshold = args
    return decompose(H, kind, threshold)


def build_multidigraph(
    C: Coloring, kind: str, threshold: int | None = None, jobs: int = 1
) -> ColoredMultidigraph:
    """Decompose every color class and collect the arcs.

    Raises :class:`StructureViolation` tagged with the first color whose
    class does not decompose.
    """
    if threshold is None:
        threshold = LOOSE_THRESHOLD if kind == "loose" else MESSY_THRESHOLD
    classes = C.classes
    # a class with fewer triples than the threshold has an empty core
    work = [c for c in range(C.k) if len(classes[c]) >= threshold]
    decomps: dict[int, Decomposition] = {}
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {c: pool.submit(_decompose_color, (classes[c], kind, threshold)) for c in work}
            for c in work:
                try:
                    decomps[c] = futures[c].result()
                except StructureViolation as exc:
                    raise exc.with_color(c) from None
    else:
        for c in work:
            try:
                decomps[c] = decompose(classes[c], kind, threshold)
            except StructureViolation as exc:
                raise exc.with_color(c) from None

    arcs: set[Arc] = set()
    cores, strays, steiner = [], [], []
    for c in range(C.k):
        d = decomps.get(c)
        if d is None:
            cores.append(frozenset())
            strays.append(classes[c].triple_set)
            steiner.append(frozenset())
            continue
        for y, body in d.A.items():
            arcs.update((z, y, c) for z in body)
        if isinstance(d, LooseDecomposition):
            for a, b in d.locked_pairs:
                arcs.add((a, b, c))
                arcs.add((b, a, c))
            steiner.append(frozenset())
        else:
            steiner.append(d.steiner_vertices())
        cores.append(d.core.triple_set)
        strays.append(d.stray)
    return ColoredMultidigraph(
        C.n, C.k, kind, threshold, frozenset(arcs), tuple(cores), tuple(strays), tuple(steiner), C
    )


# -- pair classes --------------------------------------------------------


class PairTag(enum.Enum):
    TWO_CYCLE = "two-cycle"
    PARALLEL = "parallel"
    SOLO = "solo"
    UNCOVERED = "uncovered"


@dataclass(frozen=True)
class PairInfo:
    tag: PairTag
    source: int | None = None  # tail of the one-way arcs (parallel/solo)
    target: int | None = None
    colors: tuple[int, ...] = ()


@dataclass(frozen=True)
class PairClassification:
    n: int
    pairs: dict[tuple[int, int], PairInfo]

    def counts(self) -> dict[PairTag, int]:
        out = dict.fromkeys(PairTag, 0)
        for info in self.pairs.values():
            out[info.tag] += 1
        return out

    def tag(self, u: int, v: int) -> PairTag:
        return self.pairs[(min(u, v), max(u, v))].tag


def classify_pairs(M: ColoredMultidigraph) -> PairClassification:
    on_pair: dict[tuple[int, int], list[Arc]] = defaultdict(list)
    for arc in M.arcs:
        u, v, _ = arc
        on_pair[(min(u, v), max(u, v))].append(arc)
    pairs = {}
    for p in combinations(range(M.n), 2):
        arcs = on_pair.get(p)
        if not arcs:
            pairs[p] = PairInfo(PairTag.UNCOVERED)
            continue
        tails = {u for u, _, _ in arcs}
        if len(tails) == 2:
            pairs[p] = PairInfo(PairTag.TWO_CYCLE, colors=tuple(sorted(c for *_, c in arcs)))
            continue
        u, v, _ = arcs[0]
        colors = tuple(sorted(c for *_, c in arcs))
        tag = PairTag.SOLO if len(arcs) == 1 else PairTag.PARALLEL
        pairs[p] = PairInfo(tag, u, v, colors)
    return PairClassification(M.n, pairs)


def oriented_reduct(M: ColoredMultidigraph) -> Digraph:
    """Arc ``u -> v`` whenever ``M`` has an arc that way but none back."""
    simple = {(u, v) for u, v, _ in M.arcs}
    return Digraph(M.n, (a for a in simple if (a[1], a[0]) not in simple))


# -- statistics ----------------------------------------------------------

PER_VERTEX_FIELDS = (
    "m_in", "m_out", "s", "t", "p_out", "p_in", "q_out", "q_in", "d_out", "d_in", "xi", "uncovered",
)


@dataclass(frozen=True)
class Stats:
    n: int
    k: int
    kind: str
    m_in: tuple[int, ...]
    m_out: tuple[int, ...]
    s: tuple[int, ...]
    t: tuple[int, ...]
    p_out: tuple[int, ...]
    p_in: tuple[int, ...]
    q_out: tuple[int, ...]
    q_in: tuple[int, ...]
    d_out: tuple[int, ...]
    d_in: tuple[int, ...]
    xi: tuple[int, ...]
    uncovered: tuple[int, ...]
    arcs: int
    S: int
    T: int
    P: int
    solo_pairs: int
    uncovered_pairs: int
    stray_total: int

    @property
    def t_bar(self) -> float:
        return 2 * self.T / self.n if self.n else 0.0

    @property
    def p_hat(self) -> float | None:
        return self.P / (self.n - self.k) if self.n > self.k else None


def xi_pair(M: ColoredMultidigraph, u: int, v: int) -> int:
    """Number of ``z`` such that ``uvz`` is a stray triple (in its color)."""
    return sum(1 for s in M.strays for t in s if u in t and v in t)


def compute_stats(M: ColoredMultidigraph, pc: PairClassification | None = None) -> Stats:
    pc = pc or classify_pairs(M)
    n = M.n
    z = lambda: [0] * n  # noqa: E731
    m_in, m_out, s, t = z(), z(), z(), z()
    p_out, p_in, q_out, q_in, unc, xi = z(), z(), z(), z(), z(), z()
    for u, v, _ in M.arcs:
        m_out[u] += 1
        m_in[v] += 1
    for support in M.steiner_support:
        for v in support:
            s[v] += 1
    for (a, b), info in pc.pairs.items():
        if info.tag is PairTag.TWO_CYCLE:
            t[a] += 1
            t[b] += 1
        elif info.tag is PairTag.PARALLEL:
            p_out[info.source] += 1
            p_in[info.target] += 1
        elif info.tag is PairTag.SOLO:
            q_out[info.source] += 1
            q_in[info.target] += 1
        else:
            unc[a] += 1
            unc[b] += 1
    for stray in M.strays:
        for tr in stray:
            for v in tr:
                xi[v] += 1
    d_out = [p + q for p, q in zip(p_out, q_out)]
    d_in = [p + q for p, q in zip(p_in, q_in)]
    counts = pc.counts()
    return Stats(
        n, M.k, M.kind,
        *(tuple(x) for x in (m_in, m_out, s, t, p_out, p_in, q_out, q_in, d_out, d_in, xi, unc)),
        arcs=len(M.arcs),
        S=sum(s),
        T=counts[PairTag.TWO_CYCLE],
        P=counts[PairTag.PARALLEL],
        solo_pairs=counts[PairTag.SOLO],
        uncovered_pairs=counts[PairTag.UNCOVERED],
        stray_total=M.stray_total,
    )


# -- audits --------------------------------------------------------------


@dataclass(frozen=True)
class AuditItem:
    name: str
    relation: str
    lhs: float
    rhs: float
    holds: bool
    asserted: bool = True
    worst_vertex: int | None = None

    @property
    def slack(self) -> float:
        if self.relation == "<=":
            return self.rhs - self.lhs
        return self.lhs - self.rhs if self.relation == ">=" else -abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class AuditReport:
    items: tuple[AuditItem, ...]

    @property
    def ok(self) -> bool:
        return all(i.holds for i in self.items if i.asserted)

    def failures(self) -> list[AuditItem]:
        return [i for i in self.items if i.asserted and not i.holds]

    def __getitem__(self, name: str) -> AuditItem:
        for i in self.items:
            if i.name == name:
                return i
        raise KeyError(name)


def _rel(name, lhs, rel, rhs, asserted=True, worst=None) -> AuditItem:
    holds = {"==": lhs == rhs, "<=": lhs <= rhs, ">=": lhs >= rhs}[rel]
    return AuditItem(name, rel, lhs, rhs, holds, asserted, worst)


def _per_vertex(name, n, lhs_fn, rel, rhs_fn) -> AuditItem:
    """Per-vertex relation; reports the vertex with the least slack."""
    worst, worst_slack, wl, wr = None, None, 0, 0
    for v in range(n):
        lhs, rhs = lhs_fn(v), rhs_fn(v)
        slack = {"<=": rhs - lhs, ">=": lhs - rhs, "==": -abs(lhs - rhs)}[rel]
        if worst_slack is None or slack < worst_slack:
            worst, worst_slack, wl, wr = v, slack, lhs, rhs
    if worst is None:
        return AuditItem(name, rel, 0, 0, True)
    return _rel(name, wl, rel, wr, worst=worst)


def audit_identities(M: ColoredMultidigraph, pc: PairClassification, st: Stats) -> AuditReport:
    """Exact counting identities of the multidigraph, plus reported bounds."""
    n, k = M.n, M.k
    pairs = comb(n, 2)
    covered = pairs - st.uncovered_pairs
    items = [
        _rel("pair_partition", st.solo_pairs + st.P + st.T + st.uncovered_pairs, "==", pairs),
        _rel("sum_m_out_is_arcs", sum(st.m_out), "==", st.arcs),
        _rel("sum_m_in_is_arcs", sum(st.m_in), "==", st.arcs),
        _rel("T_is_half_sum_t", st.T, "==", sum(st.t) / 2),
        _rel("P_is_sum_p_out", st.P, "==", sum(st.p_out)),
        _rel("arcs_cover_pairs", st.arcs, ">=", covered + st.P + st.T),
        _per_vertex("m_out_plus_s_at_most_k", n, lambda v: st.m_out[v] + st.s[v], "<=", lambda v: k),
        _per_vertex(
            "pair_accounting", n,
            lambda v: st.d_out[v] + st.d_in[v] + st.t[v] + st.uncovered[v], "==", lambda v: n - 1,
        ),
        _per_vertex(
            "oneway_in_middle", n,
            lambda v: st.m_out[v] + st.d_in[v] + st.uncovered[v], ">=", lambda v: n - 1,
        ),
        _per_vertex(
            "oneway_in_left", n,
            lambda v: k - st.s[v] + st.p_in[v] + st.q_in[v], ">=", lambda v: st.m_out[v] + st.d_in[v],
        ),
        _rel("xi_sum_is_three_strays", sum(st.xi), "==", 3 * st.stray_total),
    ]
    m = M.threshold
    worst_color = max(range(k), key=lambda c: len(M.strays[c]), default=None)
    items.append(
        _rel(
            "stray_per_color_bound",
            len(M.strays[worst_color]) if worst_color is not None else 0,
            "<=",
            (m - 1) * n,
        )
    )

    # uncovered pairs: per color at most one core triple through the pair,
    # so the remaining n-2-(core triples) triples through it are stray
    core_codeg: dict[tuple[int, int], list[int]] = defaultdict(lambda: [0] * k)
    for c, core in enumerate(M.cores):
        for tr in core:
            for a, b in combinations(tr, 2):
                core_codeg[(a, b)][c] += 1
    stray_codeg: dict[tuple[int, int], int] = defaultdict(int)
    for stray in M.strays:
        for tr in stray:
            for a, b in combinations(tr, 2):
                stray_codeg[(a, b)] += 1
    unc_pairs = [p for p, info in pc.pairs.items() if info.tag is PairTag.UNCOVERED]
    worst_per_color = max((max(core_codeg[p]) if p in core_codeg else 0 for p in unc_pairs), default=0)
    pressure = sum(stray_codeg.get(p, 0) for p in unc_pairs)
    items.append(_rel("uncovered_core_codegree_per_color", worst_per_color, "<=", 1))
    # needs every triple colored, i.e. an instance built from a coloring
    items.append(
        _rel(
            "uncovered_stray_pressure", pressure, ">=", len(unc_pairs) * max(n - k - 2, 0),
            asserted=M.coloring is not None,
        )
    )
    items.append(_rel("uncovered_stray_pressure_cap", pressure, "<=", 3 * st.stray_total))

    D = oriented_reduct(M)
    items.append(_rel("reduct_is_oriented", int(is_oriented(D)), "==", 1))
    items.append(_rel("reduct_arcs_solo_plus_parallel", len(D.arcs), "==", st.solo_pairs + st.P))

    # reported only: these asymptotic bounds carry epsilon slack
    items.append(_rel("two_cycle_density_bound", n, "<=", 4 * k / 3 + st.t_bar, asserted=False))
    if st.p_hat is not None:
        items.append(_rel("parallel_density_bound", n, "<=", 1.5 * k + st.p_hat / 2, asserted=False))
    items.append(_rel("stray_total_vs_nk_bound", st.stray_total, "<=", (m - 1) * n * k, asserted=False))
    if n - k - 2 > 0:
        items.append(
            _rel(
                "uncovered_vs_nk_bound",
                st.uncovered_pairs, "<=", (m - 1) * n * k / (n - k - 2), asserted=False,
            )
        )
    return AuditReport(tuple(items))


# -- directed triangles --------------------------------------------------


@dataclass(frozen=True)
class TriangleCheck:
    triangles: int
    saturated: bool
    checked: tuple[tuple[int, int, int], ...]
    contradictions: tuple[tuple[tuple[int, int, int], int], ...]

    @property
    def ok(self) -> bool:
        return not self.contradictions


def triangle_cross_check(
    M: ColoredMultidigraph, D: Digraph | None = None, cap: int = 10_000
) -> TriangleCheck:
    """Each directed triangle of ``D`` must span a triple that is stray in its color.

    Its pairs carry one-way arcs only, so the triple can be neither a
    locked-pair triple nor a star triple.
    """
    if M.kind != "loose":
        raise ValueError("triangle cross-check applies to the loose multidigraph")
    if M.coloring is None:
        raise ValueError("triangle cross-check needs the coloring")
    D = D if D is not None else oriented_reduct(M)
    census = directed_triangle_census(D, cap=cap, max_samples=cap)
    bad = []
    for tri in census.samples:
        tr = tuple(sorted(tri))
        c = M.coloring.color_of(tr)
        if tr in M.cores[c]:
            bad.append((tri, c))
    return TriangleCheck(census.count, census.saturated, census.samples, tuple(bad))


# -- serialization -------------------------------------------------------


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def format_stats_text(st: Stats, audit: AuditReport | None = None) -> str:
    lines = [
        f"kind: {st.kind}",
        f"n: {st.n}",
        f"k: {st.k}",
        f"arcs: {st.arcs}",
        f"S: {st.S}",
        f"T: {st.T}",
        f"P: {st.P}",
        f"solo_pairs: {st.solo_pairs}",
        f"uncovered_pairs: {st.uncovered_pairs}",
        f"stray_total: {st.stray_total}",
        f"t_bar: {_fmt(st.t_bar)}",
        f"p_hat: {_fmt(st.p_hat)}",
    ]
    if audit is not None:
        for it in audit.items:
            status = ("pass" if it.holds else "FAIL") if it.asserted else "report"
            where = "" if it.worst_vertex is None else f" vertex={it.worst_vertex}"
            lines.append(
                f"audit.{it.name}: {status} {_fmt(it.lhs)} {it.relation} {_fmt(it.rhs)}{where}"
            )
    return "\n".join(lines) + "\n"


def format_stats_tsv(st: Stats) -> str:
    rows = ["\t".join(("vertex",) + PER_VERTEX_FIELDS)]
    for v in range(st.n):
        rows.append("\t".join([str(v)] + [str(getattr(st, f)[v]) for f in PER_VERTEX_FIELDS]))
    return "\n".join(rows) + "\n"


def format_audit_tsv(audit: AuditReport) -> str:
    rows = ["name\tstatus\tlhs\trelation\trhs\tslack"]
    for it in audit.items:
        status = ("pass" if it.holds else "fail") if it.asserted else "report"
        rows.append("\t".join((it.name, status, _fmt(it.lhs), it.relation, _fmt(it.rhs), _fmt(it.slack))))
    return "\n".join(rows) + "\n"
