"""Graph JSON format, matrix rendering, and DOT export.

The graph document is strict JSON: unknown fields are rejected so typos
surface early. Serialization is canonical (schema field order, 2-space
indent, trailing newline) and parse(serialize(g)) == g, including node and
edge order.

    {
      "format_version": 1,
      "unit": "ms",
      "nodes": [{"id": "v0", "label": "...", "kind": "auto"}, ...],
      "edges": [{"id": "a", "from": "v0", "to": "v1", "weight": 3,
                 "kind": "scheduling"}, ...]
    }
"""

from __future__ import annotations

import csv
import io
import json
import re

from .graph import (
    Activity,
    ActivityEdge,
    ActivityGraph,
    EDGE_DEPENDENCY_ONLY,
    EDGE_DUMMY,
    EDGE_KINDS,
    EDGE_SCHEDULING,
    GraphBuildError,
    KIND_AUTO,
    NODE_KINDS,
    build_graph,
)
from .localization import LocalizationReport
from .matrices import AdjacencyMatrix, DependencyMatrix, IncidenceMatrix
from .schedule import Schedule

FORMAT_VERSION = 1

_DOCUMENT_FIELDS = {"format_version", "unit", "nodes", "edges"}
_NODE_FIELDS = {"id", "label", "kind"}
_EDGE_FIELDS = {"id", "from", "to", "weight", "kind"}


class ParseError(ValueError):
    """Malformed JSON; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line} column {column}: {message}")


class SchemaError(ValueError):
    """Well-formed JSON that violates the graph schema; carries a locus
    like ``edges[3].weight``."""

    def __init__(self, message: str, locus: str):
        self.locus = locus
        super().__init__(f"{locus}: {message}")


def parse_document(data: bytes | str) -> tuple[list[Activity], list[ActivityEdge], str]:
    """Schema-checked decode into activities, edges and unit, without the
    structural graph validation (see ``parse_graph``)."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"invalid UTF-8: {exc.reason}", 1, 1) from None
    else:
        text = data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None

    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object", "$")
    for key in doc:
        if key not in _DOCUMENT_FIELDS:
            raise SchemaError(f"unknown field {key!r}", key)
    version = _get(doc, "format_version", "$")
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {version!r}", "format_version")
    unit = doc.get("unit", "ms")
    if not isinstance(unit, str) or not unit:
        raise SchemaError("unit must be a non-empty string", "unit")

    raw_nodes = _get(doc, "nodes", "$")
    if not isinstance(raw_nodes, list):
        raise SchemaError("nodes must be an array", "nodes")
    activities = [_parse_node(item, f"nodes[{i}]") for i, item in enumerate(raw_nodes)]

    raw_edges = _get(doc, "edges", "$")
    if not isinstance(raw_edges, list):
        raise SchemaError("edges must be an array", "edges")
    edges = [_parse_edge(item, f"edges[{i}]") for i, item in enumerate(raw_edges)]
    return activities, edges, unit


def parse_graph(data: bytes | str) -> ActivityGraph:
    """Parse and fully validate; structural errors surface as SchemaError
    with the offending array locus."""
    activities, edges, unit = parse_document(data)
    try:
        return build_graph(activities, edges, unit=unit)
    except GraphBuildError as exc:
        raise _locate_build_error(exc, activities, edges) from None


def _locate_build_error(
    exc: GraphBuildError, activities: list[Activity], edges: list[ActivityEdge]
) -> SchemaError:
    issue = exc.issues[0]
    locus = "$"
    if issue.ids:
        target = issue.ids[0]
        for i, e in enumerate(edges):
            if e.id == target:
                locus = f"edges[{i}]"
                break
        else:
            for i, a in enumerate(activities):
                if a.id == target:
                    locus = f"nodes[{i}]"
                    break
    return SchemaError(issue.message, locus)


def _get(mapping: dict, key: str, locus: str):
    if key not in mapping:
        raise SchemaError(f"missing required field {key!r}", locus)
    return mapping[key]


def _parse_node(item, locus: str) -> Activity:
    if not isinstance(item, dict):
        raise SchemaError("node must be an object", locus)
    for key in item:
        if key not in _NODE_FIELDS:
            raise SchemaError(f"unknown field {key!r}", f"{locus}.{key}")
    node_id = _get(item, "id", locus)
    if not isinstance(node_id, str):
        raise SchemaError("id must be a string", f"{locus}.id")
    label = item.get("label")
    if label is not None and not isinstance(label, str):
        raise SchemaError("label must be a string", f"{locus}.label")
    kind = item.get("kind", KIND_AUTO)
    if kind not in NODE_KINDS:
        raise SchemaError(f"unknown node kind {kind!r}", f"{locus}.kind")
    return Activity(node_id, label, kind)


def _parse_edge(item, locus: str) -> ActivityEdge:
    if not isinstance(item, dict):
        raise SchemaError("edge must be an object", locus)
    for key in item:
        if key not in _EDGE_FIELDS:
            raise SchemaError(f"unknown field {key!r}", f"{locus}.{key}")
    edge_id = _get(item, "id", locus)
    if not isinstance(edge_id, str):
        raise SchemaError("id must be a string", f"{locus}.id")
    tail = _get(item, "from", locus)
    head = _get(item, "to", locus)
    for field_name, value in (("from", tail), ("to", head)):
        if not isinstance(value, str):
            raise SchemaError(f"{field_name} must be a string", f"{locus}.{field_name}")
    weight = _get(item, "weight", locus)
    if isinstance(weight, bool) or not isinstance(weight, int):
        raise SchemaError(
            f"edge {edge_id!r}: weight must be an integer number of time units",
            f"{locus}.weight",
        )
    if weight < 0:
        raise SchemaError(
            f"edge {edge_id!r}: weight must be non-negative", f"{locus}.weight"
        )
    kind = item.get("kind", EDGE_SCHEDULING)
    if kind not in EDGE_KINDS:
        raise SchemaError(f"unknown edge kind {kind!r}", f"{locus}.kind")
    return ActivityEdge(edge_id, tail, head, weight, kind)


def serialize_graph(g: ActivityGraph) -> bytes:
    """Canonical UTF-8 document bytes; inverse of ``parse_graph``."""
    nodes = []
    for a in g.activities:
        entry: dict = {"id": a.id}
        if a.label is not None:
            entry["label"] = a.label
        if a.declared_kind != KIND_AUTO:
            entry["kind"] = a.declared_kind
        nodes.append(entry)
    edges = [
        {"id": e.id, "from": e.tail, "to": e.head, "weight": e.weight, "kind": e.kind}
        for e in g.edges
    ]
    doc = {
        "format_version": FORMAT_VERSION,
        "unit": g.unit,
        "nodes": nodes,
        "edges": edges,
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def matrix_csv(matrix: IncidenceMatrix | AdjacencyMatrix | DependencyMatrix) -> str:
    """CSV with column labels in the header row and the row node id in the
    first column."""
    row_labels, col_labels = _matrix_labels(matrix)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([""] + list(col_labels))
    for label, row in zip(row_labels, matrix.rows):
        writer.writerow([label, *row])
    return buffer.getvalue()


def matrix_text(matrix: IncidenceMatrix | AdjacencyMatrix | DependencyMatrix) -> str:
    """Aligned plain-text table of the same cells as the CSV form."""
    row_labels, col_labels = _matrix_labels(matrix)
    cells = [[str(v) for v in row] for row in matrix.rows]
    label_width = max((len(r) for r in row_labels), default=0)
    widths = [
        max(len(col_labels[j]), max((len(row[j]) for row in cells), default=0))
        for j in range(len(col_labels))
    ]
    lines = [
        (
            " " * label_width
            + "".join("  " + col_labels[j].rjust(widths[j]) for j in range(len(col_labels)))
        ).rstrip()
    ]
    for label, row in zip(row_labels, cells):
        lines.append(
            (
                label.ljust(label_width)
                + "".join("  " + row[j].rjust(widths[j]) for j in range(len(row)))
            ).rstrip()
        )
    return "\n".join(lines) + "\n"


def _matrix_labels(matrix) -> tuple[tuple[str, ...], tuple[str, ...]]:
    if isinstance(matrix, IncidenceMatrix):
        return matrix.node_ids, matrix.edge_ids
    return matrix.node_ids, matrix.node_ids


_BARE_DOT_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _dot_id(name: str) -> str:
    if _BARE_DOT_ID.match(name):
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    g: ActivityGraph,
    schedule: Schedule | None = None,
    report: LocalizationReport | None = None,
) -> bytes:
    """Render the graph in DOT: critical nodes double-circled (when a
    schedule is given), dependency-only edges dashed, dummy edges dotted,
    edge labels carry weights, and independent-fault symptoms from the
    report are marked red."""
    critical = set(schedule.critical_nodes) if schedule else set()
    independent = set(report.independent) if report else set()
    lines = ["digraph activities {", "  rankdir=LR;"]
    for a in g.activities:
        attrs: list[str] = []
        if schedule is not None:
            attrs.append("shape=doublecircle" if a.id in critical else "shape=circle")
        if a.id in independent:
            attrs.append("color=red")
            attrs.append('xlabel="independent fault"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_dot_id(a.id)}{suffix};")
    for e in g.edges:
        attrs = [f'label="{e.weight}"']
        if e.kind == EDGE_DEPENDENCY_ONLY:
            attrs.append("style=dashed")
        elif e.kind == EDGE_DUMMY:
            attrs.append("style=dotted")
        lines.append(f"  {_dot_id(e.tail)} -> {_dot_id(e.head)} [{', '.join(attrs)}];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")
