from math import comb

import pytest

from helpers import brute_contains, brute_extremal
from triplepaths.coloring import colex_triples
from triplepaths.extremal import (
    canonical_form,
    classify_witness,
    extremal_number,
    format_messy_table,
    is_intersecting,
    messy_expected_classes,
    messy_formula,
    verify_messy_extremal,
)
from triplepaths.hypergraph import Hypergraph3, complete_hypergraph
from triplepaths.patterns import contains_pattern, pattern
from triplepaths.structure import star_hypergraph


def from_mask(n, mask):
    ts = list(colex_triples(n))
    return Hypergraph3(n, [t for i, t in enumerate(ts) if mask >> i & 1])


@pytest.mark.parametrize("name", ["messy", "kite", "tight", "loose", "f5"])
def test_values_match_bruteforce(name):
    P = pattern(name)
    for n in range(3, 7):
        if name != "messy" and n == 6:
            continue
        best, _ = brute_extremal(P, n)
        assert extremal_number(P, n).value == best, (name, n)


def test_witness_classes_match_bruteforce():
    M = pattern("messy")
    for n in (4, 5, 6):
        best, masks = brute_extremal(M, n)
        brute = {canonical_form(from_mask(n, m)) for m in masks}
        r = extremal_number(M, n, collect_witnesses=True)
        assert r.exact and r.value == best
        assert {canonical_form(w) for w in r.witnesses} == brute


def test_witnesses_are_free_and_optimal():
    for name in ("messy", "kite", "tight"):
        P = pattern(name)
        r = extremal_number(P, 6, collect_witnesses=True)
        for w in r.witnesses:
            assert len(w) == r.value
            assert contains_pattern(w, P) is None
            assert not brute_contains(w.triples, 6, P)


def test_messy_formula_small_n():
    M = pattern("messy")
    for n in range(3, 8):
        assert extremal_number(M, n).value == messy_formula(n)
    assert [messy_formula(n) for n in range(4, 9)] == [4, 10, 10, 15, 21]


def test_messy_star_unique_at_seven():
    r = extremal_number(pattern("messy"), 7, collect_witnesses=True)
    assert r.value == 15 and r.classes == ("star",)


def test_both_families_present_at_six():
    r = extremal_number(pattern("messy"), 6, collect_witnesses=True)
    forms = {canonical_form(w) for w in r.witnesses}
    assert canonical_form(star_hypergraph(6)) in forms
    K5 = Hypergraph3(6, complete_hypergraph(5).triples)
    assert canonical_form(K5) in forms


def test_monotone_in_n():
    for name in ("messy", "kite", "tight"):
        vals = [extremal_number(pattern(name), n).value for n in range(3, 8)]
        assert vals == sorted(vals)


def test_below_pattern_size_everything_is_free():
    L = pattern("loose")
    for n in range(3, 7):
        assert extremal_number(L, n).value == comb(n, 3)


def test_kite_extremal_is_matching():
    # kite-free means codegree at most 1
    assert [extremal_number(pattern("kite"), n).value for n in (4, 6, 7)] == [1, 4, 7]


def test_budget_marks_inexact():
    r = extremal_number(pattern("messy"), 8, budget_ms=1)
    assert r.value >= 0
    if not r.exact:
        assert r.value <= 21


def test_parallel_matches_serial():
    P = pattern("messy")
    a = extremal_number(P, 6, collect_witnesses=True)
    b = extremal_number(P, 6, collect_witnesses=True, jobs=2)
    assert a.value == b.value
    assert {canonical_form(w) for w in a.witnesses} == {canonical_form(w) for w in b.witnesses}


def test_classify_witness():
    assert classify_witness(star_hypergraph(7)) == "star"
    assert classify_witness(Hypergraph3(6, complete_hypergraph(5).triples)) == "complete5"
    assert classify_witness(Hypergraph3(6, [(0, 1, 2), (3, 4, 5)])) == "other"


def test_is_intersecting():
    assert is_intersecting(star_hypergraph(6))
    assert is_intersecting(complete_hypergraph(5))
    assert not is_intersecting(Hypergraph3(6, [(0, 1, 2), (3, 4, 5)]))


def test_expected_classes_and_table():
    assert messy_expected_classes(6) == ("complete5", "star")
    rows = verify_messy_extremal(5, n_min=4)
    assert all(r.match and r.classes_match for r in rows)
    text = format_messy_table(rows)
    assert text.splitlines()[0].split()[:3] == ["n", "ex", "formula"]
    tsv = format_messy_table(rows, "tsv").splitlines()
    assert len(tsv) == 3 and tsv[1].split("\t")[:3] == ["4", "4", "4"]
