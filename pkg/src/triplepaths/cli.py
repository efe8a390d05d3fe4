"""Command-line entry point.

Exit codes: 0 success / verified, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

from .coloring import (
    ColoringFormatError,
    format_coloring,
    kind_pattern,
    lower_bound_coloring,
    monochromatic_embedding,
    parse_coloring,
    ramsey_exhaustive,
)
from .extremal import extremal_number, format_messy_table, verify_messy_extremal
from .hypergraph import HypergraphFormatError, format_hypergraph, m_core, parse_hypergraph
from .multidigraph import (
    audit_identities,
    build_multidigraph,
    classify_pairs,
    compute_stats,
    format_audit_tsv,
    format_stats_text,
    format_stats_tsv,
)
from .patterns import contains_pattern, embedded_triples, parse_pattern
from .structure import (
    GeneratorParams,
    InfeasibleParams,
    StructureViolation,
    decompose,
    format_decomposition,
    generate_free,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@contextlib.contextmanager
def _open_in(path):
    if path in (None, "-"):
        yield sys.stdin
    else:
        with open(path, encoding="ascii") as fh:
            yield fh


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            yield fh


def _read_hypergraph(path):
    with _open_in(path) as fh:
        return parse_hypergraph(fh)


def _read_coloring(path):
    with _open_in(path) as fh:
        return parse_coloring(fh)


def _triples_str(ts) -> str:
    return " ".join("".join(str(v) if v < 10 else f"({v})" for v in t) for t in ts)


# -- commands ------------------------------------------------------------


def cmd_detect(args, out) -> int:
    P = parse_pattern(args.pattern)
    H = _read_hypergraph(args.inp)
    emb = contains_pattern(H, P)
    if emb is None:
        out.write(f"pattern: {P.label}\nresult: free\n")
        found = False
    else:
        out.write(f"pattern: {P.label}\nresult: found\n")
        out.write("embedding: " + " ".join(map(str, emb)) + "\n")
        out.write("triples: " + " ".join(" ".join(map(str, t)) + ";" for t in embedded_triples(P, emb)).rstrip(";") + "\n")
        found = True
    if args.expect == "free" and found or args.expect == "found" and not found:
        return EXIT_FAIL
    return EXIT_OK


def cmd_core(args, out) -> int:
    H = _read_hypergraph(args.inp)
    res = m_core(H, args.threshold)
    out.write(f"threshold: {args.threshold}\n")
    out.write(f"core_triples: {len(res.core)}\n")
    out.write(f"core_vertices: {len(res.core.support())}\n")
    out.write(f"stray_count: {len(res.stray)}\n")
    out.write("removal_order: " + (" ".join(map(str, res.removal_order)) or "-") + "\n")
    if args.core_out:
        with _open_out(args.core_out) as fh:
            fh.write(format_hypergraph(res.core))
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    H = _read_hypergraph(args.inp)
    try:
        d = decompose(H, args.kind, args.threshold)
    except StructureViolation as exc:
        out.write(f"kind: {args.kind}\nviolation: {exc}\n")
        return EXIT_FAIL
    out.write(format_decomposition(d))
    return EXIT_OK


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from None


def cmd_generate(args, out) -> int:
    sizes = args.star_sizes or ()
    num_stars = args.stars if args.stars is not None else len(sizes)
    p = GeneratorParams(
        num_stars=num_stars,
        star_sizes=sizes,
        num_locked_pairs=args.locked_pairs,
        steiner_vertices=args.steiner_vertices,
        steiner_triples=args.steiner_triples,
        centers_in_steiner=args.centers_in_steiner,
        star_density=args.density,
        locked_pair_reach=args.reach,
        threshold=args.threshold,
        seed=args.seed,
        shuffle=not args.no_shuffle,
    )
    H, truth = generate_free(args.kind, p)
    out.write(format_hypergraph(H))
    if args.truth_out:
        with _open_out(args.truth_out) as fh:
            fh.write(format_decomposition(truth))
    return EXIT_OK


def cmd_color_lb(args, out) -> int:
    out.write(format_coloring(lower_bound_coloring(args.kind, args.k)))
    return EXIT_OK


def cmd_check_coloring(args, out) -> int:
    if args.construct:
        if args.k is None:
            raise UsageError("--construct needs --k")
        C = lower_bound_coloring(args.kind, args.k)
    else:
        C = _read_coloring(args.inp)
        if args.k is not None and args.k != C.k:
            raise UsageError(f"file has k={C.k}, --k says {args.k}")
    P = kind_pattern(args.kind)
    hit = monochromatic_embedding(C, P)
    out.write(f"kind: {args.kind}\nn: {C.n}\nk: {C.k}\n")
    if hit is None:
        out.write("result: free\n")
        return EXIT_OK
    c, emb = hit
    out.write(f"result: monochromatic\ncolor: {c}\n")
    out.write("embedding: " + " ".join(map(str, emb)) + "\n")
    return EXIT_FAIL


def cmd_digraph_stats(args, out) -> int:
    C = _read_coloring(args.inp)
    try:
        M = build_multidigraph(C, args.kind, args.threshold, jobs=args.jobs)
    except StructureViolation as exc:
        out.write(f"kind: {args.kind}\nviolation: {exc}\n")
        return EXIT_FAIL
    pc = classify_pairs(M)
    st = compute_stats(M, pc)
    audit = audit_identities(M, pc, st)
    if args.format == "tsv":
        out.write(format_audit_tsv(audit) if args.table == "audit" else format_stats_tsv(st))
    else:
        out.write(format_stats_text(st, audit))
    return EXIT_OK if audit.ok else EXIT_FAIL


def cmd_extremal(args, out) -> int:
    if args.table:
        if args.pattern != "messy":
            raise UsageError("--table checks the messy-path closed form; use --pattern messy")
        rows = verify_messy_extremal(args.n, n_min=args.n_min, budget_ms=args.budget_ms, jobs=args.jobs)
        out.write(format_messy_table(rows, args.format))
        ok = all(r.match and r.exact for r in rows)
        return EXIT_OK if ok else EXIT_FAIL
    P = parse_pattern(args.pattern)
    r = extremal_number(P, args.n, args.budget_ms, collect_witnesses=not args.no_witnesses, jobs=args.jobs)
    classes = sorted(set(r.classes))
    if args.format == "tsv":
        out.write("pattern\tn\tex\texact\twitness_classes\tnum_witnesses\n")
        out.write(f"{P.label}\t{r.n}\t{r.value}\t{str(r.exact).lower()}\t{','.join(classes)}\t{len(r.witnesses)}\n")
    else:
        out.write(f"pattern={P.label}\nn={r.n}\nex={r.value}\nexact={str(r.exact).lower()}\n")
        out.write(f"witnesses={len(r.witnesses)}\n")
        for cls in classes:
            out.write(f"witness class {cls}: {r.classes.count(cls)}\n")
        if args.show_witnesses:
            for w, cls in zip(r.witnesses, r.classes):
                out.write(f"{cls}: {_triples_str(w.triples)}\n")
    return EXIT_OK


def cmd_ramsey_tiny(args, out) -> int:
    P = parse_pattern(args.pattern)
    if args.n is not None:
        ns = [args.n]
    else:
        ns = range(1, args.n_max + 1)
    value = None
    for n in ns:
        r = ramsey_exhaustive(P, args.k, n, args.budget_ms)
        state = {True: "arrows", False: "avoidable", None: "undecided"}[r.arrow]
        out.write(f"n={n}: {state} nodes={r.nodes}\n")
        if r.arrow is None:
            break
        if r.arrow:
            value = n
            break
    if args.n is None:
        out.write(f"r_{args.k}({P.label})={'unknown' if value is None else value}\n")
    return EXIT_OK


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="triplepaths", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        return p

    def kind(p):
        p.add_argument("--kind", choices=("loose", "messy"), required=True)

    def inp(p):
        p.add_argument("--in", dest="inp", default=None, help="input file (default stdin)")

    p = add("detect", cmd_detect, "find a copy of a pattern")
    p.add_argument("--pattern", required=True)
    p.add_argument("--expect", choices=("free", "found"), default=None)
    inp(p)

    p = add("core", cmd_core, "m-core and stray triples")
    p.add_argument("--threshold", type=int, required=True)
    p.add_argument("--core-out", default=None, help="write the core hypergraph here")
    inp(p)

    p = add("decompose", cmd_decompose, "X/Y/Z decomposition of the core")
    kind(p)
    p.add_argument("--threshold", type=int, default=None)
    inp(p)

    p = add("generate", cmd_generate, "random path-free structured hypergraph")
    kind(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--stars", type=int, default=None)
    p.add_argument("--star-sizes", type=_int_list, default=None)
    p.add_argument("--locked-pairs", type=int, default=0)
    p.add_argument("--reach", type=int, default=None)
    p.add_argument("--steiner-vertices", type=int, default=0)
    p.add_argument("--steiner-triples", type=int, default=None)
    p.add_argument("--centers-in-steiner", action="store_true")
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--no-shuffle", action="store_true")
    p.add_argument("--truth-out", default=None, help="write the planted decomposition here")

    p = add("color-lb", cmd_color_lb, "lower-bound coloring")
    kind(p)
    p.add_argument("--k", type=int, required=True)

    p = add("check-coloring", cmd_check_coloring, "verify a coloring has no monochromatic path")
    kind(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--construct", action="store_true", help="check the lower-bound coloring")
    inp(p)

    p = add("digraph-stats", cmd_digraph_stats, "colored multidigraph statistics and audits")
    kind(p)
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.add_argument("--table", choices=("vertices", "audit"), default="vertices")
    p.add_argument("--jobs", type=int, default=1)
    inp(p)

    p = add("extremal", cmd_extremal, "exact extremal number")
    p.add_argument("--pattern", required=True)
    p.add_argument("--n", type=int, required=True, help="vertex count (largest n with --table)")
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--table", action="store_true", help="messy closed-form table for n-min..n")
    p.add_argument("--budget-ms", type=int, default=None)
    p.add_argument("--no-witnesses", action="store_true")
    p.add_argument("--show-witnesses", action="store_true")
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.add_argument("--jobs", type=int, default=1)

    p = add("ramsey-tiny", cmd_ramsey_tiny, "exact tiny Ramsey numbers")
    p.add_argument("--pattern", required=True)
    p.add_argument("--k", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--n-max", type=int, default=None)
    p.add_argument("--budget-ms", type=int, default=None)
    return ap


def _validate(args) -> None:
    for name in ("k", "n", "n_max", "threshold", "jobs", "budget_ms", "stars"):
        v = getattr(args, name, None)
        if v is not None and v < (0 if name in ("budget_ms", "stars") else 1):
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    if getattr(args, "pattern", None) is not None:
        parse_pattern(args.pattern)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        with _open_out(args.out) as out:
            return args.fn(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"triplepaths: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HypergraphFormatError, ColoringFormatError) as exc:
        print(f"triplepaths: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleParams as exc:
        print(f"triplepaths: infeasible parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"triplepaths: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"triplepaths: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
