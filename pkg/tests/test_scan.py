from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from ebu.canonical import are_isomorphic
from ebu.centrality import distinct_value_count, is_edge_betweenness_uniform
from ebu.graph import CirculantSpec, Graph, GraphError, circulant, family
from ebu.graph6 import parse_graph6, write_graph6
from ebu.scan import (
    CENSUS_EXPECTATIONS,
    ConjectureClassSpec,
    Filter,
    FilterError,
    ScanOptions,
    checkpoint_path,
    conjecture_check,
    conjecture_row,
    eleven_vertex_census,
    evaluate_line,
    scan_file,
    scan_records,
    scan_stream,
    verify_vt_census,
)
from ebu.symmetry import is_edge_transitive, is_vertex_transitive
from oracles import DATA, brute_force_betweenness, graph6_lines

SURVEY = "ebu & !edge_transitive"


def test_filter_syntax():
    for text in ("ebu ∧ ¬edge_transitive", "ebu && !edge_transitive", "ebu and not edge_transitive", SURVEY):
        f = Filter.parse(text)
        assert f.names() == {"ebu", "edge_transitive"}
        assert f.evaluate({"ebu": True, "edge_transitive": False}.get)
        assert not f.evaluate({"ebu": True, "edge_transitive": True}.get)
    assert Filter.parse("ebu ∨ distance_regular").evaluate({"ebu": False, "distance_regular": True}.get)
    assert not Filter.parse("edge_transitive").evaluate(lambda name: None)


def test_filter_short_circuits():
    asked = []

    def lookup(name):
        asked.append(name)
        return False

    Filter.parse("ebu & edge_transitive").evaluate(lookup)
    assert asked == ["ebu"]


@pytest.mark.parametrize("bad", ["", "ebu &", "girth", "ebu + 1", "__import__('os')", "ebu == 3", "f(ebu)"])
def test_filter_errors(bad):
    with pytest.raises(FilterError):
        Filter.parse(bad)


def test_options_validation():
    with pytest.raises(ValueError):
        ScanOptions(jobs=0)
    with pytest.raises(ValueError):
        ScanOptions(predicates=("girth",))
    with pytest.raises(FilterError):
        ScanOptions(filter="ebu &")
    opts = ScanOptions(predicates=("vertex_transitive", "edge_transitive"))
    assert opts.requested() == ("edge_transitive", "vertex_transitive")


def test_triangle_record():
    opts = ScanOptions(predicates=("edge_transitive",))
    [rec] = list(scan_records([b"Bw"], opts))
    assert rec == {
        "index": 0,
        "graph6": "Bw",
        "n": 3,
        "m": 3,
        "ebu": True,
        "uniform_value": "2",
        "distinct_value_count": 1,
        "edge_transitive": True,
    }


def test_optional_fields_only_when_requested():
    [rec] = list(scan_records([b"Bw"]))
    assert "edge_transitive" not in rec and "vertex_transitive" not in rec
    opts = ScanOptions(predicates=("edge_transitive", "vertex_transitive", "distance_regular"))
    [rec] = list(scan_records([b"Bg"], opts))
    assert rec["ebu"] and rec["uniform_value"] == "4"
    assert rec["edge_transitive"] is True and rec["vertex_transitive"] is False and rec["distance_regular"] is False


def test_edgeless_record():
    [rec] = list(scan_records([b"@"], ScanOptions(predicates=("edge_transitive",))))
    assert rec["ebu"] is False and rec["distinct_value_count"] == 0 and rec["edge_transitive"] is None


def test_six_vertex_stream_matches_brute_force():
    lines = graph6_lines(6)
    opts = ScanOptions(predicates=("edge_transitive",))
    records = list(scan_records(lines, opts))
    assert len(records) == 112
    assert [r["index"] for r in records] == list(range(112))
    uniform = set()
    for line, rec in zip(lines, records):
        g = parse_graph6(line)
        values = set(brute_force_betweenness(g).values())
        assert rec["graph6"] == line.decode()
        assert rec["ebu"] == (len(values) == 1) == (rec["distinct_value_count"] == 1)
        assert rec["distinct_value_count"] == len(values)
        if rec["ebu"]:
            assert Fraction(rec["uniform_value"]) == next(iter(values))
            uniform.add(line)
        assert rec["edge_transitive"] == is_edge_transitive(g)
    expected = [
        family("cycle", [6]),
        family("complete", [6]),
        family("complete_bipartite", [3, 3]),
        circulant(6, [1, 2]),
    ]
    for h in expected:
        assert any(are_isomorphic(h, parse_graph6(line)) for line in uniform)


def test_filter_soundness_on_eight_vertices():
    lines = graph6_lines(8)
    opts = ScanOptions(predicates=("edge_transitive", "vertex_transitive"), filter=SURVEY)
    records = list(scan_records(lines, opts))
    assert len(records) == 1
    for rec in records:
        g = parse_graph6(rec["graph6"].encode())
        assert is_edge_betweenness_uniform(g)[0]
        assert not is_edge_transitive(g)
        assert rec["vertex_transitive"] == is_vertex_transitive(g) is False


def test_filter_does_not_compute_edge_transitivity_for_non_uniform():
    # a non-uniform graph never reaches the edge-transitivity step under the survey filter
    rec = evaluate_line(0, b"Cr", ("edge_transitive",), Filter.parse(SURVEY))
    assert rec is None


def test_malformed_line_gives_error_record():
    out = list(scan_stream([b"Bw", b"B~~", b"A_"]))
    docs = [json.loads(line) for line in out]
    assert [d["index"] for d in docs] == [0, 1, 2]
    assert "error" in docs[1] and docs[1]["graph6"] == "B~~"
    assert docs[2]["ebu"] is True


@pytest.mark.parametrize("jobs", [2, 3])
def test_parallel_output_identical(jobs):
    lines = graph6_lines(7)
    base = "".join(scan_stream(lines, ScanOptions(predicates=("edge_transitive",), batch_size=37)))
    par = "".join(scan_stream(lines, ScanOptions(predicates=("edge_transitive",), jobs=jobs, batch_size=37)))
    assert par == base


def test_scan_file_and_resume(tmp_path):
    src = tmp_path / "in.g6"
    src.write_bytes(b"".join(line + b"\n" for line in graph6_lines(7)))
    full = tmp_path / "full.jsonl"
    summary = scan_file(src, full, ScanOptions(batch_size=50), checkpoint_every=200)
    assert summary.complete and summary.records_in == 853 and summary.records_out == 853
    reference = full.read_bytes()

    # interrupt: keep a mid-run checkpoint plus some unflushed trailing garbage, then resume
    part = tmp_path / "part.jsonl"
    lines = reference.splitlines(keepends=True)
    part.write_bytes(b"".join(lines[:400]) + b'{"index": 400, "trunc')
    offset = len(b"".join(lines[:400]))
    checkpoint_path(part).write_text(json.dumps({"index": 400, "offset": offset, "records_out": 400, "errors": 0}))
    summary = scan_file(src, part, ScanOptions(batch_size=50), resume=True, checkpoint_every=200)
    assert summary.resumed_from == 400 and summary.complete and summary.records_out == 853
    assert part.read_bytes() == reference
    state = json.loads(checkpoint_path(part).read_text())
    assert state["index"] == 853 and state["offset"] == len(reference)


def test_scan_file_gzip_input(tmp_path):
    out = tmp_path / "o.jsonl"
    summary = scan_file(DATA / "connected_n8.g6.gz", out, ScanOptions(filter=SURVEY, predicates=("edge_transitive",)))
    assert summary.records_in == 11117 and summary.records_out == 1
    [rec] = [json.loads(line) for line in out.read_text().splitlines()]
    assert rec["graph6"] == "GEhbtg"


def test_eleven_vertex_census():
    graphs = eleven_vertex_census()
    assert [name for name, _ in graphs][:3] == ["C_11", "complement of C_11", "K_11"]
    report = verify_vt_census([g for _, g in graphs], 11)
    assert report.distinct_counts() == (1, 2, 1, 2, 2, 3, 3)
    assert report.edge_transitive == 2 and report.non_ebu == 5 and not report.ebu_not_et
    assert report.consistent and not report.defects
    for (_, g), d in zip(graphs, report.distinct_counts()):
        assert distinct_value_count(g) == d


def test_census_flags_defects_and_mismatches():
    graphs = [g for _, g in eleven_vertex_census()]
    bad = graphs[:6] + [family("path", [11])]
    report = verify_vt_census(bad, 11)
    assert report.defects == [6]
    assert not report.consistent
    doc = report.to_json()
    assert doc["schema"] == "census-report/1" and doc["census_defects"] == [6]
    with pytest.raises(GraphError):
        verify_vt_census([family("cycle", [5])], 11)


def test_census_skips_disconnected():
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    report = verify_vt_census([two_triangles, family("cycle", [6])], 6)
    assert report.skipped_disconnected == 1 and report.count == 1


def test_census_finds_the_fifteen_vertex_exception():
    # the order-15 members that are circulants on two chords, plus the complete graph
    graphs = [circulant(15, [1, b]) for b in (2, 3, 4, 5, 6, 7)] + [family("complete", [15])]
    report = verify_vt_census(graphs, 15)
    [entry] = report.ebu_not_et
    assert are_isomorphic(parse_graph6(entry.graph6.encode()), circulant(15, [1, 6]))
    assert CENSUS_EXPECTATIONS[15].ebu_not_et == 1


def test_conjecture_class_specs():
    assert ConjectureClassSpec(3, 1).spec == CirculantSpec(20, (1, 4, 6))
    assert ConjectureClassSpec(9, 1).spec == CirculantSpec(49, (1, 8, 13))
    assert ConjectureClassSpec(5, 2).spec == CirculantSpec(36, (1, 8, 17))
    for bad in ((2, 1), (10, 1), (3, 0)):
        with pytest.raises(GraphError):
            ConjectureClassSpec(*bad)
    with pytest.raises(GraphError):
        conjecture_check(3, 0)


def test_conjecture_rows_agree_with_generic_computation():
    for cls in (3, 4, 9):
        row = conjecture_row(cls, 1)
        g = circulant(row.spec)
        uniform, value = is_edge_betweenness_uniform(g)
        assert row.ebu == uniform and row.uniform_value == value
        assert row.edge_transitive == is_edge_transitive(g)
    assert conjecture_row(3, 1).consistent
    assert conjecture_row(3, 1).uniform_value == Fraction(34, 3)


def test_conjecture_counterexample_is_reported_not_raised():
    report = conjecture_check(4, 1)
    assert not report.consistent
    doc = report.to_json()
    assert doc["schema"] == "conjecture-report/1" and doc["status"] == "counterexample found"
    assert doc["rows"][0]["status"] == "counterexample" and doc["rows"][0]["uniform_value"] is None


def test_graph6_text_is_preserved_verbatim():
    g = circulant(15, [1, 6])
    text = write_graph6(g)
    [rec] = list(scan_records([text]))
    assert rec["graph6"] == text.decode() and rec["uniform_value"] == "13"


CENSUS = DATA / "census"
TOOLS = Path(__file__).resolve().parent.parent / "tools"


def test_census_generator_reproduces_shipped_files(tmp_path):
    res = subprocess.run([sys.executable, str(TOOLS / "make_vt_census.py"), str(tmp_path)], capture_output=True)
    assert res.returncode == 0, res.stderr
    for order in (12, 13, 14, 15):
        assert (tmp_path / f"vt{order}.g6").read_bytes() == (CENSUS / f"vt{order}.g6").read_bytes()


def _heawood():
    # incidence graph of the Fano plane, lines {i, i+1, i+3} mod 7
    lines = [{i % 7, (i + 1) % 7, (i + 3) % 7} for i in range(7)]
    inc = [(p, 7 + j) for j, line in enumerate(lines) for p in line]
    non = [(p, 7 + j) for j, line in enumerate(lines) for p in range(7) if p not in line]
    return Graph.from_edges(14, inc), Graph.from_edges(14, non)


def test_fourteen_vertex_census_edge_transitive_members():
    heawood, co_heawood = _heawood()
    c7_blown_up = Graph.from_edges(
        14, [(2 * i + x, 2 * ((i + 1) % 7) + y) for i in range(7) for x in (0, 1) for y in (0, 1)]
    )
    named = [
        family("cycle", [14]),
        heawood,
        co_heawood,
        c7_blown_up,
        family("complete_minus_perfect_matching", [14]),
        family("complete_bipartite", [7, 7]),
        family("complete_bipartite", [7, 7]).remove_edges([(i, 7 + i) for i in range(7)]),
        family("complete", [14]),
    ]
    census = [parse_graph6(line) for line in (CENSUS / "vt14.g6").read_bytes().split()]
    found = [g for g in census if is_edge_transitive(g)]
    assert len(found) == 8
    for h in named:
        assert is_edge_transitive(h) and is_edge_transitive(h, method="orbits")
        assert sum(are_isomorphic(h, g) for g in found) == 1


def test_census_files_pairwise_distinct_and_vertex_transitive():
    for order in (12, 13, 14, 15):
        census = [parse_graph6(line) for line in (CENSUS / f"vt{order}.g6").read_bytes().split()]
        keys = {write_graph6(g) for g in census}
        assert len(keys) == len(census)
        assert all(g.vertex_count == order and is_vertex_transitive(g) for g in census)
