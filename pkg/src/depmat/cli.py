"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 usage or input error,
3 validation failed (the ``validate`` subcommand found errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .fileio import (
    ParseError,
    SchemaError,
    export_dot,
    matrix_csv,
    matrix_text,
    parse_document,
    parse_graph,
)
from .graph import (
    ActivityGraph,
    CyclicScheduleError,
    GraphBuildError,
    UnknownNodeError,
    validate,
)
from .localization import VIEW_ALL, VIEW_SCHEDULING, localize
from .matrices import (
    CapacityError,
    adjacency_matrix,
    dependency_matrix,
    incidence_matrix,
    transitive_closure,
)
from .schedule import EmptyGraphError, classify_activities, compute_schedule
from .simulation import GeneratorParams, InvalidParamsError, run_experiment

_INPUT_ERRORS = (
    ParseError,
    SchemaError,
    GraphBuildError,
    UnknownNodeError,
    CyclicScheduleError,
    CapacityError,
    EmptyGraphError,
    InvalidParamsError,
    OSError,
)

_VIEWS = {"all": VIEW_ALL, "scheduling": VIEW_SCHEDULING}


def _load(path: str) -> ActivityGraph:
    with open(path, "rb") as handle:
        return parse_graph(handle.read())


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, ensure_ascii=False))


def cmd_validate(args) -> int:
    with open(args.file, "rb") as handle:
        activities, edges, unit = parse_document(handle.read())
    report = validate(ActivityGraph(tuple(activities), tuple(edges), unit=unit))
    if args.format == "json":
        _emit_json(
            {
                "ok": report.ok,
                "issues": [
                    {
                        "severity": i.severity,
                        "code": i.code,
                        "message": i.message,
                        "ids": list(i.ids),
                    }
                    for i in report.issues
                ],
            }
        )
    else:
        for issue in report.issues:
            print(f"{issue.severity}: {issue.message}")
        print(f"ok: {'yes' if report.ok else 'no'}")
    return 0 if report.ok else 3


def cmd_matrix(args) -> int:
    graph = _load(args.file)
    if args.kind == "incidence":
        matrix = incidence_matrix(graph)
    elif args.kind == "adjacency":
        matrix = adjacency_matrix(graph)
    elif args.kind == "dependency":
        matrix = dependency_matrix(graph)
    else:
        matrix = transitive_closure(dependency_matrix(graph))
    if args.format == "csv":
        print(matrix_csv(matrix), end="")
    elif args.format == "json":
        row_labels = matrix.node_ids
        col_labels = matrix.edge_ids if args.kind == "incidence" else matrix.node_ids
        payload = {
            "kind": args.kind,
            "unit": graph.unit,
            "row_labels": list(row_labels),
            "col_labels": list(col_labels),
            "rows": [list(row) for row in matrix.rows],
        }
        if args.kind == "closure":
            payload["closed"] = True
        _emit_json(payload)
    else:
        print(matrix_text(matrix), end="")
    return 0


def cmd_cpm(args) -> int:
    graph = _load(args.file)
    schedule = compute_schedule(graph)
    classification = classify_activities(graph, schedule)
    if args.format == "json":
        _emit_json(
            {
                "unit": graph.unit,
                "duration": schedule.duration,
                "nodes": [
                    {
                        "id": v,
                        "earliest": schedule.earliest[v],
                        "latest": schedule.latest[v],
                        "slack": schedule.slack[v],
                        "class": classification.kinds[v],
                        "override": v in classification.overrides,
                    }
                    for v in graph.node_ids
                ],
                "critical_nodes": list(schedule.critical_nodes),
                "critical_paths": [list(p) for p in schedule.paths],
            }
        )
        return 0
    print(f"duration: {schedule.duration} {graph.unit}")
    header = ("node", "earliest", "latest", "slack", "class")
    table = [
        (
            v,
            str(schedule.earliest[v]),
            str(schedule.latest[v]),
            str(schedule.slack[v]),
            classification.kinds[v]
            + (" (override)" if v in classification.overrides else ""),
        )
        for v in graph.node_ids
    ]
    widths = [max(len(header[c]), *(len(row[c]) for row in table)) for c in range(5)]
    print("  ".join(header[c].ljust(widths[c]) for c in range(5)).rstrip())
    for row in table:
        print("  ".join(row[c].ljust(widths[c]) for c in range(5)).rstrip())
    print("critical nodes: " + ", ".join(schedule.critical_nodes))
    for path in schedule.paths:
        print("critical path: " + " -> ".join(path))
    return 0


def cmd_localize(args) -> int:
    graph = _load(args.file)
    symptoms = [s for s in args.symptoms.split(",") if s]
    report = localize(graph, symptoms, view=_VIEWS[args.view])
    if args.format == "json":
        _emit_json(
            {
                "view": report.view,
                "symptoms": list(report.symptoms),
                "candidates": [
                    {
                        "node": c.node,
                        "explains": list(c.explains),
                        "is_critical": c.is_critical,
                        "min_distance": c.min_distance,
                        "scc": c.scc,
                    }
                    for c in report.candidates
                ],
                "independent": list(report.independent),
                "nodes_examined": report.nodes_examined,
                "node_count": len(report.node_ids),
                "policy": list(report.policy.keys),
            }
        )
        return 0
    print(f"view: {report.view}")
    print("symptoms: " + ", ".join(report.symptoms))
    header = ("rank", "node", "explains", "critical", "distance", "scc")
    table = [
        (
            str(rank),
            c.node,
            str(len(c.explains)),
            "yes" if c.is_critical else "no",
            str(c.min_distance),
            str(c.scc),
        )
        for rank, c in enumerate(report.candidates, start=1)
    ]
    widths = [max(len(header[c]), *(len(row[c]) for row in table)) for c in range(6)]
    print("  ".join(header[c].ljust(widths[c]) for c in range(6)).rstrip())
    for row in table:
        print("  ".join(row[c].ljust(widths[c]) for c in range(6)).rstrip())
    print("independent: " + (", ".join(report.independent) or "(none)"))
    print(f"nodes examined: {report.nodes_examined} of {len(report.node_ids)}")
    return 0


def cmd_simulate(args) -> int:
    params = GeneratorParams(
        node_count=args.nodes,
        layer_count=args.layers,
        edge_density=args.density,
        max_weight=args.wmax,
        feedback_edge_fraction=args.feedback,
        seed=args.seed,
    )
    report = run_experiment(params, args.trials, args.detect_prob, args.root_policy)
    if args.format == "json":
        _emit_json(report.to_json_dict())
    elif args.format == "csv":
        print(report.to_csv(), end="")
    else:
        print(report.to_text(), end="")
    return 0


def cmd_export(args) -> int:
    graph = _load(args.file)
    try:
        schedule = compute_schedule(graph)
    except (CyclicScheduleError, EmptyGraphError):
        schedule = None
    report = None
    if args.symptoms:
        symptoms = [s for s in args.symptoms.split(",") if s]
        report = localize(graph, symptoms, view=_VIEWS[args.view])
    sys.stdout.write(export_dot(graph, schedule, report).decode("utf-8"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depmat",
        description="Activity-graph dependency matrices, critical paths, "
        "fault localization and fault-injection simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a graph file and report issues")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("matrix", help="print a matrix view of the graph")
    p.add_argument("file")
    p.add_argument(
        "--kind",
        choices=("incidence", "adjacency", "dependency", "closure"),
        default="dependency",
    )
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("cpm", help="critical-path schedule of the graph")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_cpm)

    p = sub.add_parser("localize", help="rank fault root-cause candidates")
    p.add_argument("file")
    p.add_argument("--symptoms", required=True, help="comma-separated node ids")
    p.add_argument("--view", choices=("all", "scheduling"), default="all")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("simulate", help="seeded fault-injection experiment")
    p.add_argument("--nodes", type=int, default=20)
    p.add_argument("--layers", type=int, default=4)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--feedback", type=float, default=0.1)
    p.add_argument("--wmax", type=int, default=9)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--detect-prob", type=float, default=1.0)
    p.add_argument(
        "--root-policy", choices=("critical_only", "uniform"), default="critical_only"
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export", help="render the graph as DOT")
    p.add_argument("file")
    p.add_argument("--symptoms", help="mark localization results for these symptoms")
    p.add_argument("--view", choices=("all", "scheduling"), default="all")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # unexpected; keep the message terse
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
