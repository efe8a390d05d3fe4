import subprocess
import sys
from itertools import combinations

import pytest

from triplepaths.cli import main
from triplepaths.coloring import Coloring, format_coloring, lower_bound_coloring, parse_coloring
from triplepaths.hypergraph import Hypergraph3, parse_hypergraph, read_hypergraph, write_hypergraph
from triplepaths.structure import decompose_loose, same_partition


@pytest.fixture
def loose_file(tmp_path):
    p = tmp_path / "h.txt"
    write_hypergraph(Hypergraph3(7, [(0, 1, 2), (2, 3, 4), (4, 5, 6)]), p)
    return p


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_detect_loose_path(capsys, loose_file):
    code, out, _ = run(capsys, "detect", "--pattern", "loose", "--in", str(loose_file))
    assert code == 0
    assert "result: found" in out and "embedding: 0 1 2 3 4 5 6" in out
    assert run(capsys, "detect", "--pattern", "loose", "--in", str(loose_file), "--expect", "free")[0] == 1
    assert run(capsys, "detect", "--pattern", "kite", "--in", str(loose_file), "--expect", "free")[0] == 0


def test_extremal_messy_seven(capsys):
    code, out, _ = run(capsys, "extremal", "--pattern", "messy", "--n", "7")
    assert code == 0
    assert "ex=15" in out.splitlines() and "witness class star: 1" in out


def test_extremal_tsv_and_table(capsys):
    code, out, _ = run(capsys, "extremal", "--pattern", "tight", "--n", "5", "--format", "tsv")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("pattern\tn\tex") and lines[1].split("\t")[:3] == ["tight", "5", "4"]
    code, out, _ = run(capsys, "extremal", "--pattern", "messy", "--n", "5", "--table", "--format", "tsv")
    assert code == 0 and len(out.splitlines()) == 3
    assert run(capsys, "extremal", "--pattern", "loose", "--n", "5", "--table")[0] == 2


def test_check_coloring_construct(capsys):
    code, out, _ = run(capsys, "check-coloring", "--kind", "loose", "--k", "8", "--construct")
    assert code == 0 and "result: free" in out and "n: 13" in out


def test_check_coloring_file(capsys, tmp_path):
    p = tmp_path / "c.txt"
    assert run(capsys, "color-lb", "--kind", "messy", "--k", "3", "--out", str(p))[0] == 0
    assert parse_coloring(p.read_text()) == lower_bound_coloring("messy", 3)
    assert run(capsys, "check-coloring", "--kind", "messy", "--in", str(p))[0] == 0
    assert run(capsys, "check-coloring", "--kind", "messy", "--k", "4", "--in", str(p))[0] == 2
    # one color on K7 has a loose path
    bad = tmp_path / "bad.txt"
    bad.write_text(format_coloring(Coloring(7, 1, (0,) * 35)))
    code, out, _ = run(capsys, "check-coloring", "--kind", "loose", "--in", str(bad))
    assert code == 1 and "result: monochromatic" in out


def test_core_command(capsys, tmp_path):
    p = tmp_path / "h.txt"
    write_hypergraph(Hypergraph3(6, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3), (3, 4, 5)]), p)
    core = tmp_path / "core.txt"
    code, out, _ = run(capsys, "core", "--threshold", "3", "--in", str(p), "--core-out", str(core))
    assert code == 0
    assert "core_triples: 4" in out and "stray_count: 1" in out
    assert len(read_hypergraph(core)) == 4


def test_generate_and_decompose(capsys, tmp_path):
    h = tmp_path / "g.txt"
    truth = tmp_path / "truth.txt"
    argv = ["generate", "--kind", "loose", "--seed", "3", "--star-sizes", "24,25", "--out", str(h), "--truth-out", str(truth)]
    assert run(capsys, *argv)[0] == 0
    H = read_hypergraph(h)
    code, out, _ = run(capsys, "decompose", "--kind", "loose", "--in", str(h))
    assert code == 0
    assert out == truth.read_text()
    first = h.read_bytes()
    run(capsys, *argv)
    assert h.read_bytes() == first
    assert decompose_loose(H).Y and same_partition(decompose_loose(H), decompose_loose(H))


def test_decompose_violation_exit_one(capsys, tmp_path):
    p = tmp_path / "k.txt"
    write_hypergraph(Hypergraph3(30, combinations(range(30), 3)), p)
    code, out, _ = run(capsys, "decompose", "--kind", "messy", "--in", str(p))
    assert code == 1 and "violation:" in out


def test_generate_infeasible_exit_two(capsys):
    code, _, err = run(capsys, "generate", "--kind", "loose", "--star-sizes", "22")
    assert code == 2 and "infeasible" in err


def test_digraph_stats(capsys, tmp_path):
    p = tmp_path / "c.txt"
    run(capsys, "color-lb", "--kind", "loose", "--k", "5", "--out", str(p))
    code, out, _ = run(capsys, "digraph-stats", "--kind", "loose", "--in", str(p))
    assert code == 0 and out.startswith("kind: loose\n") and "audit.pair_partition: pass" in out
    code, out, _ = run(capsys, "digraph-stats", "--kind", "loose", "--in", str(p), "--format", "tsv")
    assert code == 0 and len(out.splitlines()) == 11
    code, out, _ = run(capsys, "digraph-stats", "--kind", "loose", "--in", str(p), "--format", "tsv", "--table", "audit")
    assert code == 0 and out.splitlines()[0].startswith("name\tstatus")


def test_ramsey_tiny(capsys):
    code, out, _ = run(capsys, "ramsey-tiny", "--pattern", "kite", "--k", "1", "--n-max", "6")
    assert code == 0 and out.splitlines()[-1] == "r_1(kite)=4"
    code, out, _ = run(capsys, "ramsey-tiny", "--pattern", "kite", "--k", "2", "--n", "3")
    assert out.startswith("n=3: avoidable")


@pytest.mark.parametrize(
    "argv",
    [
        ["detect", "--pattern", "snake", "--in", "x"],
        ["extremal", "--pattern", "messy", "--n", "0"],
        ["check-coloring", "--kind", "loose", "--construct"],
        ["color-lb", "--kind", "loose", "--k", "-1"],
        ["detect", "--pattern", "loose", "--in", "/nonexistent/file.txt"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_rejects_unknown_flags(capsys):
    with pytest.raises(SystemExit) as info:
        main(["detect", "--pattern", "loose", "--bogus"])
    assert info.value.code == 2


def test_malformed_input_exit_two(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("5 2\n0 1 2\n0 1 9\n")
    code, _, err = run(capsys, "detect", "--pattern", "loose", "--in", str(p))
    assert code == 2 and "line 3" in err


def test_module_entry_point_uses_stdin(loose_file):
    r = subprocess.run(
        [sys.executable, "-m", "triplepaths", "detect", "--pattern", "loose"],
        input=loose_file.read_text(), capture_output=True, text=True,
    )
    assert r.returncode == 0 and "result: found" in r.stdout


def test_output_is_deterministic(capsys):
    argv = ["generate", "--kind", "messy", "--seed", "7", "--star-sizes", "14,16", "--steiner-vertices", "29"]
    outs = [run(capsys, *argv)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert len(parse_hypergraph(outs[0])) > 0
