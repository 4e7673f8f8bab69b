"""Command-line front end.

Exit codes: 0 success, 1 a requested property check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterator, Sequence

from .canonical import are_isomorphic, canonical_form
from .centrality import edge_betweenness, format_rational
from .graph import CirculantSpec, Graph, GraphError, circulant
from .graph6 import iter_graph6_lines, parse_graph6, write_graph6
from .scan import (
    CENSUS_EXPECTATIONS,
    OPTIONAL_PREDICATES,
    FilterError,
    ScanOptions,
    conjecture_check,
    eleven_vertex_census,
    open_graph6,
    scan_file,
    scan_stream,
    verify_vt_census,
    verify_vt_census_file,
)
from .structure import ClassId, ebu_certificate
from .symmetry import circulant_isomorphic, circulant_lambda, distance_regularity, edge_orbits

EXIT_OK, EXIT_FALSIFIED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(doc: dict, out) -> None:
    out.write(json.dumps(doc) + "\n")


def _table(rows: Sequence[Sequence[object]], out) -> None:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        out.write("  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip() + "\n")


def _graphs(args) -> Iterator[tuple[str, Graph]]:
    """Graphs named by a positional graph6 string, --file, or --circulant."""
    given = sum(x is not None for x in (args.graph6, args.file, args.circulant))
    if given != 1:
        raise UsageError("give exactly one of GRAPH6, --file, --circulant")
    if args.circulant is not None:
        spec = CirculantSpec.parse(args.circulant)
        yield str(spec), circulant(spec)
    elif args.graph6 is not None:
        yield args.graph6, parse_graph6(args.graph6)
    else:
        with open_graph6(args.file) as f:
            for line in iter_graph6_lines(f):
                yield line.decode("ascii", errors="replace"), parse_graph6(line)


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph6", nargs="?", help="graph6 string")
    p.add_argument("--file", help="graph6 file, one graph per line (.gz accepted)")
    p.add_argument("--circulant", metavar="K:J1,J2,...", help="circulant C_k(j1, j2, ...)")
    p.add_argument("--table", action="store_true", help="human-readable table instead of JSON")


def cmd_ebc(args, out) -> int:
    status = EXIT_OK
    for name, g in _graphs(args):
        report = edge_betweenness(g)
        doc = {"schema": "ebc/1", "input": name, "n": g.vertex_count, "m": g.edge_count, **report.to_json()}
        if args.table:
            out.write(f"# {name}: n={g.vertex_count} m={g.edge_count} uniform={report.is_uniform}\n")
            rows = [("u", "v", "B'")] + [(u, v, format_rational(x)) for (u, v), x in sorted(report.values.items())]
            if len(rows) > 1:
                _table(rows, out)
        else:
            _emit(doc, out)
        if args.expect_uniform and not report.is_uniform:
            status = EXIT_FALSIFIED
    return status


def cmd_transitivity(args, out) -> int:
    status = EXIT_OK
    for name, g in _graphs(args):
        label = canonical_form(g)
        orbits = len(label.orbits(g.vertex_count))
        eorbits = len(edge_orbits(g, label.automorphism_generators)) if g.edge_count else 0
        vt = orbits == 1
        et = eorbits == 1 if g.edge_count else None
        doc = {
            "schema": "transitivity/1",
            "input": name,
            "n": g.vertex_count,
            "m": g.edge_count,
            "group_order": str(label.group_order),
            "vertex_orbits": orbits,
            "edge_orbits": eorbits,
            "vertex_transitive": vt,
            "edge_transitive": et,
        }
        if args.table:
            _table([(k, v) for k, v in doc.items() if k != "schema"], out)
        else:
            _emit(doc, out)
        if (args.expect_vertex_transitive and not vt) or (args.expect_edge_transitive and not et):
            status = EXIT_FALSIFIED
    return status


def cmd_dr(args, out) -> int:
    status = EXIT_OK
    for name, g in _graphs(args):
        res = distance_regularity(g)
        arr = res.intersection_array
        doc = {
            "schema": "dr/1",
            "input": name,
            "n": g.vertex_count,
            "m": g.edge_count,
            "distance_regular": res.distance_regular,
            "intersection_array": None if arr is None else {"b": list(arr[0]), "c": list(arr[1])},
            "witness": None if res.witness is None else list(res.witness),
        }
        if args.table:
            _table([(k, v) for k, v in doc.items() if k != "schema"], out)
        else:
            _emit(doc, out)
        if args.expect_distance_regular and not res.distance_regular:
            status = EXIT_FALSIFIED
    return status


def cmd_prove(args, out) -> int:
    cert = ebu_certificate(ClassId(args.class_tag, args.n), cross_check=not args.no_cross_check)
    doc = cert.to_json()
    if args.table:
        _table([(k, v) for k, v in doc.items() if k not in ("schema", "per_source")], out)
        rows = [("source", "unused_match", "automorphism", "orbit_balanced")]
        rows += [(c.source, c.unused_match, c.automorphism_valid, c.orbit_balanced) for c in cert.per_source_checks]
        _table(rows, out)
    else:
        _emit(doc, out)
    return EXIT_OK if cert.verdict else EXIT_FALSIFIED


def cmd_scan(args, out) -> int:
    preds = tuple(p for p in (args.predicates or "").split(",") if p)
    try:
        opts = ScanOptions(predicates=preds, filter=args.filter, jobs=args.jobs, output=args.output)
    except (ValueError, FilterError) as exc:
        raise UsageError(str(exc)) from exc
    if args.output:
        summary = scan_file(args.input, args.output, opts, resume=args.resume)
        _emit({"schema": "scan-summary/1", "input": args.input, "output": args.output, **summary.to_json()},
              sys.stderr if args.output == "-" else out)
        return EXIT_OK
    with open_graph6(args.input) as f:
        for line in scan_stream(f, opts):
            out.write(line)
    return EXIT_OK


def cmd_census(args, out) -> int:
    if args.file is None:
        if args.order != 11:
            raise UsageError("only the 11-vertex census is built in; pass --file for other orders")
        report = verify_vt_census([g for _, g in eleven_vertex_census()], 11)
    else:
        report = verify_vt_census_file(args.file, args.order)
    doc = report.to_json()
    if args.table:
        _table([(k, v) for k, v in doc.items() if k not in ("schema", "entries")], out)
        for m in report.mismatches():
            out.write(f"mismatch: {m}\n")
    else:
        _emit(doc, out)
    return EXIT_OK if report.consistent else EXIT_FALSIFIED


def cmd_conjecture(args, out) -> int:
    classes = range(3, 10) if args.class_number is None else [args.class_number]
    status = EXIT_OK
    for c in classes:
        report = conjecture_check(c, args.n_max)
        if args.table:
            rows = [("class", "n", "graph", "ebu", "value", "edge_transitive", "status")]
            for r in report.rows:
                j = r.to_json()
                rows.append((c, r.n, str(r.spec), r.ebu, j["uniform_value"], r.edge_transitive, j["status"]))
            _table(rows, out)
        else:
            _emit(report.to_json(), out)
        if args.expect_consistent and not report.consistent:
            status = EXIT_FALSIFIED
    return status


def cmd_iso(args, out) -> int:
    p, q = (CirculantSpec.parse(x) for x in args.circulants)
    if p.order != q.order:
        raise UsageError("both circulants must have the same order")
    k = p.order
    if len(p.chords) != 2 or len(q.chords) != 2:
        raise UsageError("iso compares 2-chord circulants")
    lp, lq = circulant_lambda(k, *p.chords), circulant_lambda(k, *q.chords)
    by_lambda = circulant_isomorphic(k, p.chords, q.chords)
    by_canon = are_isomorphic(circulant(p), circulant(q))
    doc = {
        "schema": "iso/1",
        "k": k,
        "first": {"chords": list(p.chords), "lambda": lp.lam, "Lambda": format_rational(lp.Lam)},
        "second": {"chords": list(q.chords), "lambda": lq.lam, "Lambda": format_rational(lq.Lam)},
        "isomorphic_by_lambda": by_lambda,
        "isomorphic_by_canonical_form": by_canon,
        "agree": by_lambda == by_canon,
    }
    if args.table:
        _table([(key, v) for key, v in doc.items() if key != "schema"], out)
    else:
        _emit(doc, out)
    if args.expect_isomorphic and not by_canon:
        return EXIT_FALSIFIED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ebu", description="Exact edge betweenness and graph symmetry tools.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("ebc", help="exact per-edge betweenness and uniformity")
    _add_graph_args(p)
    p.add_argument("--expect-uniform", action="store_true", help="exit 1 unless every graph is uniform")
    p.set_defaults(func=cmd_ebc)

    p = sub.add_parser("transitivity", help="vertex and edge transitivity")
    _add_graph_args(p)
    p.add_argument("--expect-vertex-transitive", action="store_true")
    p.add_argument("--expect-edge-transitive", action="store_true")
    p.set_defaults(func=cmd_transitivity)

    p = sub.add_parser("dr", help="distance regularity and intersection arrays")
    _add_graph_args(p)
    p.add_argument("--expect-distance-regular", action="store_true")
    p.set_defaults(func=cmd_dr)

    p = sub.add_parser("prove", help="structural uniformity certificate for C_{18n-3}(1,6n) / C_{18n+3}(1,6n)")
    p.add_argument("--class", dest="class_tag", type=int, choices=(1, 2), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--no-cross-check", action="store_true", help="skip the exact edge betweenness comparison")
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("scan", help="predicate scan over a graph6 stream (JSON Lines)")
    p.add_argument("--input", required=True)
    p.add_argument("--filter", help="e.g. 'ebu & !edge_transitive' (also accepts and/or/not, ∧ ∨ ¬)")
    p.add_argument("--predicates", help="comma list from: " + ",".join(OPTIONAL_PREDICATES))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", help="output file; records go to stdout when omitted")
    p.add_argument("--resume", action="store_true", help="continue from the output's checkpoint")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("census", help="check a vertex-transitive census against the expected counts")
    p.add_argument("--file", help="graph6 census file; omit for the built-in 11-vertex list")
    p.add_argument("--order", type=int, required=True, choices=sorted(CENSUS_EXPECTATIONS))
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("conjecture", help="evaluate the further circulant classes 3..9")
    p.add_argument("--class", dest="class_number", type=int, choices=range(3, 10), metavar="{3..9}")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--expect-consistent", action="store_true", help="exit 1 if a counterexample is found")
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("iso", help="isomorphism of two 2-chord circulants")
    p.add_argument("--circulants", nargs=2, required=True, metavar="K:A,B")
    p.add_argument("--expect-isomorphic", action="store_true")
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_iso)
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, GraphError, FilterError, OSError) as exc:
        sys.stderr.write(f"ebu {args.command}: error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
