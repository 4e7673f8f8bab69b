"""Predicate scans over graph6 streams, the vertex-transitive census checks and
the numerical checks of the further circulant classes.

Output is JSON Lines with a fixed field order. Records come out in input
order whatever the worker count, so runs with different ``jobs`` produce
byte-identical files.
"""

from __future__ import annotations

import ast
import gzip
import json
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import IO, Callable, Iterable, Iterator, Sequence

from .canonical import are_isomorphic
from .centrality import _scaled_edge_betweenness, format_rational
from .graph import CirculantSpec, Graph, GraphError, circulant, is_connected
from .graph6 import iter_graph6_lines, parse_graph6, write_graph6
from .symmetry import is_distance_regular, is_edge_transitive, is_vertex_transitive

PREDICATES = ("ebu", "edge_transitive", "vertex_transitive", "distance_regular")
OPTIONAL_PREDICATES = PREDICATES[1:]
CHECKPOINT_EVERY = 100_000
BATCH_SIZE = 2_000


# -- filter expressions ------------------------------------------------------------

_SYMBOLS = {"∧": " and ", "&&": " and ", "&": " and ", "∨": " or ", "||": " or ", "|": " or ",
            "¬": " not ", "!": " not "}


class FilterError(ValueError):
    pass


@dataclass(frozen=True)
class Filter:
    """A boolean expression over predicate names, evaluated lazily."""

    text: str
    tree: ast.expr

    @classmethod
    def parse(cls, text: str) -> Filter:
        src = text
        for sym in sorted(_SYMBOLS, key=len, reverse=True):
            src = src.replace(sym, _SYMBOLS[sym])
        try:
            tree = ast.parse(src.strip(), mode="eval").body
        except SyntaxError as exc:
            raise FilterError(f"cannot parse filter {text!r}") from exc
        for node in ast.walk(tree):
            if isinstance(node, ast.Name):
                if node.id not in PREDICATES:
                    raise FilterError(f"unknown predicate {node.id!r} in filter")
            elif isinstance(node, ast.Constant):
                if not isinstance(node.value, bool):
                    raise FilterError(f"only boolean constants allowed, got {node.value!r}")
            elif not isinstance(node, (ast.BoolOp, ast.UnaryOp, ast.And, ast.Or, ast.Not, ast.Load)):
                raise FilterError(f"unsupported syntax {type(node).__name__} in filter")
        return cls(text, tree)

    def names(self) -> set[str]:
        return {n.id for n in ast.walk(self.tree) if isinstance(n, ast.Name)}

    def evaluate(self, lookup: Callable[[str], bool | None]) -> bool:
        """Short-circuit evaluation; undefined predicates (None) count as false."""

        def ev(node: ast.expr) -> bool:
            if isinstance(node, ast.Name):
                return bool(lookup(node.id))
            if isinstance(node, ast.Constant):
                return node.value
            if isinstance(node, ast.UnaryOp):
                return not ev(node.operand)
            if isinstance(node.op, ast.And):
                return all(ev(v) for v in node.values)
            return any(ev(v) for v in node.values)

        return ev(self.tree)


# -- records -------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanOptions:
    predicates: tuple[str, ...] = ()
    filter: str | None = None
    jobs: int = 1
    output: str | None = None
    batch_size: int = BATCH_SIZE

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ValueError("worker count must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")
        for p in self.predicates:
            if p not in OPTIONAL_PREDICATES:
                raise ValueError(f"unknown predicate {p!r}")
        if self.filter is not None:
            Filter.parse(self.filter)

    def requested(self) -> tuple[str, ...]:
        # fixed order regardless of how they were given
        return tuple(p for p in OPTIONAL_PREDICATES if p in self.predicates)


@dataclass(frozen=True)
class ScanRecord:
    index: int
    graph6: str
    n: int
    m: int
    ebu: bool
    uniform_value: str | None
    distinct_value_count: int
    edge_transitive: bool | None = None
    vertex_transitive: bool | None = None
    distance_regular: bool | None = None
    requested: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "index": self.index,
            "graph6": self.graph6,
            "n": self.n,
            "m": self.m,
            "ebu": self.ebu,
            "uniform_value": self.uniform_value,
            "distinct_value_count": self.distinct_value_count,
        }
        for p in self.requested:
            out[p] = getattr(self, p)
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict()) + "\n"


@dataclass(frozen=True)
class ErrorRecord:
    index: int
    graph6: str
    error: str

    def to_json_line(self) -> str:
        return json.dumps({"index": self.index, "graph6": self.graph6, "error": self.error}) + "\n"


def _optional_predicate(name: str, g: Graph) -> bool | None:
    # undefined cases (edgeless, disconnected) are reported as null
    try:
        if name == "edge_transitive":
            return is_edge_transitive(g)
        if name == "vertex_transitive":
            return is_vertex_transitive(g)
        if name == "distance_regular":
            return is_distance_regular(g)
    except GraphError:
        return None
    raise ValueError(name)


def evaluate_graph(index: int, g: Graph, text: str, requested: Sequence[str], flt: Filter | None) -> ScanRecord | None:
    """Compute one record, or ``None`` when the filter rejects the graph."""
    if g.vertex_count == 0:
        raise GraphError("empty graph")
    if g.edge_count:
        scaled, denom = _scaled_edge_betweenness(g)
        distinct = len(set(scaled.values()))
        first = next(iter(scaled.values()))
    else:
        distinct, first, denom = 0, 0, 1
    ebu = distinct == 1
    known: dict[str, bool | None] = {"ebu": ebu}

    def lookup(name: str) -> bool | None:
        if name not in known:
            known[name] = _optional_predicate(name, g)
        return known[name]

    if flt is not None and not flt.evaluate(lookup):
        return None
    for p in requested:
        lookup(p)
    return ScanRecord(
        index=index,
        graph6=text,
        n=g.vertex_count,
        m=g.edge_count,
        ebu=ebu,
        uniform_value=format_rational(Fraction(first, denom)) if ebu else None,
        distinct_value_count=distinct,
        requested=tuple(requested),
        **{p: known[p] for p in requested},
    )


def evaluate_line(index: int, line: bytes, requested: Sequence[str], flt: Filter | None):
    text = line.decode("ascii", errors="replace")
    try:
        g = parse_graph6(line)
        return evaluate_graph(index, g, text, requested, flt)
    except GraphError as exc:
        return ErrorRecord(index, text, str(exc))


def _process_batch(args) -> tuple[str, int, int]:
    """Worker entry: returns (joined output lines, passed count, error count)."""
    start, lines, requested, filter_text = args
    flt = Filter.parse(filter_text) if filter_text else None
    out = []
    passed = errors = 0
    for i, line in enumerate(lines):
        rec = evaluate_line(start + i, line, requested, flt)
        if rec is None:
            continue
        if isinstance(rec, ErrorRecord):
            errors += 1
        else:
            passed += 1
        out.append(rec.to_json_line())
    return "".join(out), passed, errors


def _batches(lines: Iterable[bytes], start: int, size: int) -> Iterator[tuple[int, list[bytes]]]:
    batch: list[bytes] = []
    index = start
    for line in lines:
        batch.append(line)
        if len(batch) == size:
            yield index, batch
            index += size
            batch = []
    if batch:
        yield index, batch


def _ordered_results(lines: Iterable[bytes], opts: ScanOptions, start: int = 0):
    """Yield (batch start, batch length, result) in input order."""
    requested = opts.requested()
    ftext = opts.filter
    batches = _batches(lines, start, opts.batch_size)
    if opts.jobs == 1:
        for s, batch in batches:
            yield s, len(batch), _process_batch((s, batch, requested, ftext))
        return
    # bounded in-flight window; futures complete out of order but are
    # consumed strictly first-in first-out
    with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
        window: deque = deque()
        limit = 2 * opts.jobs
        for s, batch in batches:
            window.append((s, len(batch), pool.submit(_process_batch, (s, batch, requested, ftext))))
            if len(window) >= limit:
                s0, n0, fut = window.popleft()
                yield s0, n0, fut.result()
        while window:
            s0, n0, fut = window.popleft()
            yield s0, n0, fut.result()


def scan_stream(lines: Iterable[bytes], opts: ScanOptions | None = None) -> Iterator[str]:
    """JSON Lines for a graph6 line source, in input order."""
    opts = opts or ScanOptions()
    for _, _, (text, _, _) in _ordered_results(iter_graph6_lines(lines), opts):
        if text:
            yield from text.splitlines(keepends=True)


def scan_records(lines: Iterable[bytes], opts: ScanOptions | None = None) -> Iterator[dict]:
    for line in scan_stream(lines, opts):
        yield json.loads(line)


# -- file scans with checkpoints ---------------------------------------------------------


@dataclass
class ScanSummary:
    records_in: int = 0
    records_out: int = 0
    errors: int = 0
    complete: bool = False
    resumed_from: int = 0

    def to_json(self) -> dict:
        return {
            "records_in": self.records_in,
            "records_out": self.records_out,
            "errors": self.errors,
            "complete": self.complete,
            "resumed_from": self.resumed_from,
        }


class ScanAborted(RuntimeError):
    def __init__(self, message: str, summary: ScanSummary):
        super().__init__(message)
        self.summary = summary


def open_graph6(path: str | os.PathLike) -> IO[bytes]:
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def checkpoint_path(output: str | os.PathLike) -> Path:
    return Path(str(output) + ".ckpt")


def _write_checkpoint(path: Path, index: int, offset: int, summary: ScanSummary) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps({"index": index, "offset": offset, "records_out": summary.records_out,
                               "errors": summary.errors}))
    os.replace(tmp, path)


def scan_file(
    input_path: str | os.PathLike,
    output_path: str | os.PathLike,
    opts: ScanOptions | None = None,
    resume: bool = False,
    checkpoint_every: int = CHECKPOINT_EVERY,
) -> ScanSummary:
    """Scan a graph6 file into a JSON Lines file, checkpointing by input index.

    With ``resume`` the output is truncated to the last checkpointed offset
    and the scan continues from the checkpointed index.
    """
    opts = opts or ScanOptions()
    ckpt = checkpoint_path(output_path)
    summary = ScanSummary()
    start = 0
    offset = 0
    if resume and ckpt.exists():
        state = json.loads(ckpt.read_text())
        start, offset = state["index"], state["offset"]
        summary.records_out = state.get("records_out", 0)
        summary.errors = state.get("errors", 0)
        summary.resumed_from = start
    mode = "r+b" if resume and offset else "wb"
    next_ckpt = (start // checkpoint_every + 1) * checkpoint_every
    with open_graph6(input_path) as src, open(output_path, mode) as out:
        if mode == "r+b":
            out.seek(offset)
            out.truncate()
        lines = iter_graph6_lines(src)
        for _ in range(start):
            if next(lines, None) is None:
                break
        summary.records_in = start
        try:
            for s, count, (text, passed, errors) in _ordered_results(lines, opts, start):
                data = text.encode("ascii")
                out.write(data)
                offset += len(data)
                summary.records_in = s + count
                summary.records_out += passed + errors
                summary.errors += errors
                if summary.records_in >= next_ckpt:
                    out.flush()
                    _write_checkpoint(ckpt, summary.records_in, offset, summary)
                    next_ckpt = (summary.records_in // checkpoint_every + 1) * checkpoint_every
        except OSError as exc:
            raise ScanAborted(f"scan aborted after {summary.records_in} records: {exc}", summary) from exc
        out.flush()
    summary.complete = True
    _write_checkpoint(ckpt, summary.records_in, offset, summary)
    return summary


# -- vertex-transitive census ------------------------------------------------------------


@dataclass(frozen=True)
class CensusExpectation:
    count: int
    edge_transitive: int
    non_ebu: int
    ebu_not_et: int
    distinct_counts: tuple[int, ...] | None = None


CENSUS_EXPECTATIONS = {
    11: CensusExpectation(7, 2, 5, 0, (1, 2, 1, 2, 2, 3, 3)),
    12: CensusExpectation(64, 11, 53, 0),
    13: CensusExpectation(13, 4, 9, 0),
    14: CensusExpectation(51, 6, 45, 0),
    15: CensusExpectation(44, 10, 33, 1),
}

# the seven connected vertex-transitive graphs on 11 vertices, in the listed order
ELEVEN_VERTEX_LIST = (
    ("C_11", (11, (1,)), False),
    ("complement of C_11", (11, (1,)), True),
    ("K_11", (11, (1, 2, 3, 4, 5)), False),
    ("C_11(1,3)", (11, (1, 3)), False),
    ("C_11(1,2)", (11, (1, 2)), False),
    ("complement of C_11(1,3)", (11, (1, 3)), True),
    ("complement of C_11(1,2)", (11, (1, 2)), True),
)


def eleven_vertex_census() -> list[tuple[str, Graph]]:
    out = []
    for name, (k, chords), comp in ELEVEN_VERTEX_LIST:
        g = circulant(CirculantSpec(k, chords))
        out.append((name, g.complement() if comp else g))
    return out


@dataclass(frozen=True)
class CensusEntry:
    index: int
    graph6: str
    vertex_transitive: bool
    edge_transitive: bool
    ebu: bool
    distinct_value_count: int

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "graph6": self.graph6,
            "vertex_transitive": self.vertex_transitive,
            "edge_transitive": self.edge_transitive,
            "ebu": self.ebu,
            "distinct_value_count": self.distinct_value_count,
        }


@dataclass(frozen=True)
class CensusReport:
    order: int
    entries: tuple[CensusEntry, ...]
    expectation: CensusExpectation | None
    skipped_disconnected: int = 0

    @property
    def count(self) -> int:
        return len(self.entries)

    @property
    def defects(self) -> list[int]:
        return [e.index for e in self.entries if not e.vertex_transitive]

    @property
    def edge_transitive(self) -> int:
        return sum(e.edge_transitive for e in self.entries)

    @property
    def non_ebu(self) -> int:
        return sum(not e.ebu for e in self.entries)

    @property
    def ebu_not_et(self) -> list[CensusEntry]:
        return [e for e in self.entries if e.ebu and not e.edge_transitive]

    def distinct_counts(self) -> tuple[int, ...]:
        return tuple(e.distinct_value_count for e in self.entries)

    def mismatches(self) -> list[str]:
        exp = self.expectation
        if exp is None:
            return []
        out = []
        observed = {
            "count": self.count,
            "edge_transitive": self.edge_transitive,
            "non_ebu": self.non_ebu,
            "ebu_not_et": len(self.ebu_not_et),
        }
        for key, value in observed.items():
            if getattr(exp, key) != value:
                out.append(f"{key}: expected {getattr(exp, key)}, observed {value}")
        if exp.distinct_counts is not None and exp.distinct_counts != self.distinct_counts():
            out.append(f"distinct counts: expected {exp.distinct_counts}, observed {self.distinct_counts()}")
        if self.defects:
            out.append(f"census defects (not vertex-transitive): {self.defects}")
        return out

    @property
    def consistent(self) -> bool:
        return not self.mismatches()

    def to_json(self) -> dict:
        exp = self.expectation
        return {
            "schema": "census-report/1",
            "order": self.order,
            "count": self.count,
            "skipped_disconnected": self.skipped_disconnected,
            "edge_transitive": self.edge_transitive,
            "non_ebu": self.non_ebu,
            "ebu_not_edge_transitive": [e.graph6 for e in self.ebu_not_et],
            "census_defects": self.defects,
            "expected": None if exp is None else {
                "count": exp.count, "edge_transitive": exp.edge_transitive,
                "non_ebu": exp.non_ebu, "ebu_not_et": exp.ebu_not_et,
            },
            "consistent": self.consistent,
            "entries": [e.to_json() for e in self.entries],
        }


def census_entry(index: int, g: Graph) -> CensusEntry:
    if g.edge_count:
        scaled, _ = _scaled_edge_betweenness(g)
        distinct = len(set(scaled.values()))
    else:
        distinct = 0
    return CensusEntry(
        index=index,
        graph6=write_graph6(g).decode(),
        vertex_transitive=is_vertex_transitive(g),
        edge_transitive=bool(g.edge_count) and is_edge_transitive(g),
        ebu=distinct == 1,
        distinct_value_count=distinct,
    )


def verify_vt_census(
    graphs: Iterable[Graph], order: int, expectation: CensusExpectation | None = None
) -> CensusReport:
    """Check a vertex-transitive census of one order against the expected counts.

    Disconnected members are skipped (the expectations count connected graphs).
    """
    if expectation is None:
        expectation = CENSUS_EXPECTATIONS.get(order)
    entries = []
    skipped = 0
    for i, g in enumerate(graphs):
        if g.vertex_count != order:
            raise GraphError(f"census graph {i} has {g.vertex_count} vertices, expected {order}")
        if not is_connected(g):
            skipped += 1
            continue
        entries.append(census_entry(i, g))
    return CensusReport(order, tuple(entries), expectation, skipped)


def verify_vt_census_file(path: str | os.PathLike, order: int) -> CensusReport:
    with open_graph6(path) as f:
        graphs = [parse_graph6(line) for line in iter_graph6_lines(f)]
    return verify_vt_census(graphs, order)


def is_isomorphic_to_circulant(g: Graph, spec: CirculantSpec) -> bool:
    return are_isomorphic(g, circulant(spec))


# -- further circulant classes -------------------------------------------------------------

CONJECTURE_CLASSES = {
    3: lambda n: (20 + 8 * (n - 1), (1, 2 * n + 2, 2 * n + 4)),
    4: lambda n: (32 + 8 * (n - 1), (1, 2 * n + 5, 2 * n + 7)),
    5: lambda n: (20 + 16 * (n - 1), (1, 4 * n, 8 * n + 1)),
    6: lambda n: (28 + 16 * (n - 1), (1, 4 * n + 4, 8 * n + 5)),
    7: lambda n: (32 + 8 * (n - 1), (1, 2 * n + 5, 4 * n + 11)),
    8: lambda n: (32 + 8 * (n - 1), (1, 2 * n + 7, 4 * n + 11)),
    9: lambda n: (49 + 14 * (n - 1), (1, 2 * n + 6, 4 * n + 9)),
}


@dataclass(frozen=True)
class ConjectureClassSpec:
    class_number: int
    n: int

    def __post_init__(self) -> None:
        if self.class_number not in CONJECTURE_CLASSES:
            raise GraphError(f"class must be in 3..9, got {self.class_number}")
        if self.n < 1:
            raise GraphError(f"n must be >= 1, got {self.n}")

    @property
    def spec(self) -> CirculantSpec:
        k, chords = CONJECTURE_CLASSES[self.class_number](self.n)
        return CirculantSpec(k, chords)


@dataclass(frozen=True)
class ConjectureRow:
    class_number: int
    n: int
    spec: CirculantSpec
    ebu: bool
    uniform_value: Fraction | None
    edge_transitive: bool

    @property
    def consistent(self) -> bool:
        return self.ebu and not self.edge_transitive

    def to_json(self) -> dict:
        return {
            "class": self.class_number,
            "n": self.n,
            "k": self.spec.order,
            "chords": list(self.spec.chords),
            "ebu": self.ebu,
            "uniform_value": None if self.uniform_value is None else format_rational(self.uniform_value),
            "edge_transitive": self.edge_transitive,
            "status": "consistent" if self.consistent else "counterexample",
        }


@dataclass(frozen=True)
class ConjectureReport:
    class_number: int
    rows: tuple[ConjectureRow, ...] = field(default=())

    @property
    def consistent(self) -> bool:
        return all(r.consistent for r in self.rows)

    def to_json(self) -> dict:
        return {
            "schema": "conjecture-report/1",
            "class": self.class_number,
            "status": "consistent" if self.consistent else "counterexample found",
            "rows": [r.to_json() for r in self.rows],
        }


def conjecture_row(class_number: int, n: int) -> ConjectureRow:
    spec = ConjectureClassSpec(class_number, n).spec
    g = circulant(spec)
    scaled, denom = _scaled_edge_betweenness(g)
    values = set(scaled.values())
    ebu = len(values) == 1
    value = Fraction(next(iter(values)), denom) if ebu else None
    return ConjectureRow(class_number, n, spec, ebu, value, is_edge_transitive(g))


def conjecture_check(class_number: int, n_max: int) -> ConjectureReport:
    """Evaluate the class for n = 1..n_max; a counterexample is reported, never raised."""
    if n_max < 1:
        raise GraphError("n_max must be >= 1")
    return ConjectureReport(class_number, tuple(conjecture_row(class_number, n) for n in range(1, n_max + 1)))
