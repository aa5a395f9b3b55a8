"""Weighted activity digraph: construction, validation, scheduling view.

Nodes are project activities, directed edges carry exact integer time
weights in a declared unit (default milliseconds). Edge kinds separate the
acyclic scheduling structure consumed by critical-path analysis from
feedback dependencies that participate only in the dependency matrix:

* ``scheduling``       — timed precedence, must be acyclic as a set
* ``dependency_only``  — dependency edge excluded from scheduling; may
                         close cycles (feedback)
* ``dummy``            — zero-weight logical precedence, scheduled

Node order and edge order are significant: they fix matrix row/column
order everywhere downstream.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

ID_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")

KIND_AUTO = "auto"
KIND_CRITICAL = "critical"
KIND_NON_CRITICAL = "non_critical"
NODE_KINDS = frozenset({KIND_AUTO, KIND_CRITICAL, KIND_NON_CRITICAL})

EDGE_SCHEDULING = "scheduling"
EDGE_DEPENDENCY_ONLY = "dependency_only"
EDGE_DUMMY = "dummy"
EDGE_KINDS = frozenset({EDGE_SCHEDULING, EDGE_DEPENDENCY_ONLY, EDGE_DUMMY})
SCHEDULING_KINDS = frozenset({EDGE_SCHEDULING, EDGE_DUMMY})

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


@dataclass(frozen=True)
class ValidationIssue:
    severity: str
    code: str
    message: str
    ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def errors(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == SEVERITY_ERROR)

    @property
    def warnings(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == SEVERITY_WARNING)


class GraphBuildError(ValueError):
    """Graph construction rejected; carries every error-severity issue."""

    def __init__(self, issues: Iterable[ValidationIssue]):
        self.issues = tuple(issues)
        first = self.issues[0]
        more = f" (+{len(self.issues) - 1} more)" if len(self.issues) > 1 else ""
        super().__init__(f"{first.code}: {first.message}{more}")


class CyclicScheduleError(ValueError):
    """The scheduling view contains a cycle; carries one witness cycle."""

    def __init__(self, cycle: Sequence[str]):
        self.cycle = tuple(cycle)
        super().__init__("scheduling cycle: " + "->".join(self.cycle))


class UnknownNodeError(ValueError):
    def __init__(self, node: str):
        self.node = node
        super().__init__(f"unknown node: {node}")


@dataclass(frozen=True)
class Activity:
    """A unit of project work. ``declared_kind`` overrides the computed
    critical/non-critical classification but never the schedule itself."""

    id: str
    label: str | None = None
    declared_kind: str = KIND_AUTO


@dataclass(frozen=True)
class ActivityEdge:
    """Directed edge ``tail -> head``: tail depends on head, and in the
    scheduling view tail precedes head by ``weight`` time units."""

    id: str
    tail: str
    head: str
    weight: int
    kind: str = EDGE_SCHEDULING


@dataclass(frozen=True)
class ActivityGraph:
    """Immutable activity digraph; safe to share across threads."""

    activities: tuple[Activity, ...]
    edges: tuple[ActivityEdge, ...]
    unit: str = "ms"

    @cached_property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.activities)

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {a.id: i for i, a in enumerate(self.activities)}

    @cached_property
    def _out(self) -> dict[str, tuple[ActivityEdge, ...]]:
        out: dict[str, list[ActivityEdge]] = {a.id: [] for a in self.activities}
        for e in self.edges:
            if e.tail in out and e.head in out:
                out[e.tail].append(e)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[ActivityEdge, ...]]:
        inc: dict[str, list[ActivityEdge]] = {a.id: [] for a in self.activities}
        for e in self.edges:
            if e.tail in inc and e.head in inc:
                inc[e.head].append(e)
        return {k: tuple(v) for k, v in inc.items()}

    def has_node(self, node: str) -> bool:
        return node in self._positions

    def position(self, node: str) -> int:
        try:
            return self._positions[node]
        except KeyError:
            raise UnknownNodeError(node) from None

    def out_edges(self, node: str) -> tuple[ActivityEdge, ...]:
        self.position(node)
        return self._out[node]

    def in_edges(self, node: str) -> tuple[ActivityEdge, ...]:
        self.position(node)
        return self._in[node]


def build_graph(
    activities: Iterable[Activity],
    edges: Iterable[ActivityEdge],
    unit: str = "ms",
) -> ActivityGraph:
    """Construct and validate a graph; raises GraphBuildError on any
    structural error (order of activities and edges is preserved)."""
    graph = ActivityGraph(tuple(activities), tuple(edges), unit=unit)
    errors = _structural_errors(graph)
    if errors:
        raise GraphBuildError(errors)
    return graph


def _structural_errors(g: ActivityGraph) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []

    def err(code: str, message: str, *ids: str) -> None:
        issues.append(ValidationIssue(SEVERITY_ERROR, code, message, tuple(ids)))

    seen_nodes: set[str] = set()
    for a in g.activities:
        if not isinstance(a.id, str) or not ID_PATTERN.match(a.id):
            err("invalid-id", f"activity id {a.id!r} is not a valid token", str(a.id))
        elif a.id in seen_nodes:
            err("duplicate-id", f"duplicate activity id: {a.id}", a.id)
        else:
            seen_nodes.add(a.id)
        if a.declared_kind not in NODE_KINDS:
            err("invalid-kind", f"activity {a.id}: unknown kind {a.declared_kind!r}", a.id)

    declared = {a.id for a in g.activities}
    seen_edges: set[str] = set()
    for e in g.edges:
        if not isinstance(e.id, str) or not ID_PATTERN.match(e.id):
            err("invalid-id", f"edge id {e.id!r} is not a valid token", str(e.id))
        elif e.id in seen_edges:
            err("duplicate-id", f"duplicate edge id: {e.id}", e.id)
        else:
            seen_edges.add(e.id)
        if e.kind not in EDGE_KINDS:
            err("invalid-kind", f"edge {e.id}: unknown kind {e.kind!r}", e.id)
        if not isinstance(e.weight, int) or isinstance(e.weight, bool):
            err("invalid-weight", f"edge {e.id}: weight must be an integer", e.id)
        elif e.weight < 0:
            err("negative-weight", f"edge {e.id}: weight {e.weight} is negative", e.id)
        elif e.kind == EDGE_DUMMY and e.weight != 0:
            err("dummy-nonzero", f"dummy edge {e.id} has non-zero weight {e.weight}", e.id)
        for endpoint in (e.tail, e.head):
            if endpoint not in declared:
                err("unknown-endpoint", f"edge {e.id}: unknown node {endpoint!r}", e.id, str(endpoint))
        if e.tail == e.head:
            err("self-loop", f"edge {e.id}: self-loop on {e.tail}", e.id)
    return issues


def validate(g: ActivityGraph) -> ValidationReport:
    """Collect all structural errors and advisory warnings (never raises)."""
    issues = _structural_errors(g)
    if not issues:
        issues.extend(_warnings(g))
    return ValidationReport(tuple(issues))


def _warnings(g: ActivityGraph) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []

    def warn(code: str, message: str, *ids: str) -> None:
        issues.append(ValidationIssue(SEVERITY_WARNING, code, message, tuple(ids)))

    touched = {e.tail for e in g.edges} | {e.head for e in g.edges}
    for a in g.activities:
        if a.id not in touched:
            warn("isolated-node", f"isolated node: {a.id}", a.id)

    sched_in = {a.id: 0 for a in g.activities}
    sched_out = {a.id: 0 for a in g.activities}
    for e in g.edges:
        if e.kind in SCHEDULING_KINDS:
            sched_out[e.tail] += 1
            sched_in[e.head] += 1
    sources = [v for v in g.node_ids if sched_in[v] == 0]
    sinks = [v for v in g.node_ids if sched_out[v] == 0]
    if len(sources) > 1:
        warn("multiple-sources", "multiple sources in scheduling view: " + ", ".join(sources), *sources)
    if len(sinks) > 1:
        warn("multiple-sinks", "multiple sinks in scheduling view: " + ", ".join(sinks), *sinks)

    succ_all = {v: [e.head for e in g.out_edges(v)] for v in g.node_ids}
    succ_sched = {v: [e.head for e in g.out_edges(v) if e.kind in SCHEDULING_KINDS] for v in g.node_ids}
    for comp in strongly_connected_components(g.node_ids, succ_all):
        if len(comp) < 2:
            continue
        members = set(comp)
        sched_cyclic = any(
            len(sub) >= 2
            for sub in strongly_connected_components(comp, {v: [w for w in succ_sched[v] if w in members] for v in comp})
        )
        if sched_cyclic:
            cycle = shortest_cycle_through(comp[0], members, succ_sched)
            warn("scheduling-cycle", "scheduling cycle: " + "->".join(cycle), *comp)
        else:
            cycle = shortest_cycle_through(comp[0], members, succ_all)
            warn("dependency-only-cycle", "dependency-only cycle: " + "->".join(cycle), *comp)
    return issues


def scheduling_subgraph(g: ActivityGraph) -> ActivityGraph:
    """Project onto scheduling and dummy edges; all nodes kept.

    Raises CyclicScheduleError (with one witness cycle) when the projected
    edge set is cyclic.
    """
    sub = ActivityGraph(
        g.activities,
        tuple(e for e in g.edges if e.kind in SCHEDULING_KINDS),
        unit=g.unit,
    )
    succ = {v: [e.head for e in sub.out_edges(v)] for v in sub.node_ids}
    for comp in strongly_connected_components(sub.node_ids, succ):
        if len(comp) >= 2:
            raise CyclicScheduleError(shortest_cycle_through(comp[0], set(comp), succ))
    return sub


def strongly_connected_components(
    ids: Sequence[str], succ: Mapping[str, Sequence[str]]
) -> list[list[str]]:
    """Tarjan's algorithm, iterative. Components are returned sorted by the
    input position of their first member, members in input order."""
    position = {v: i for i, v in enumerate(ids)}
    index_of: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = itertools.count()

    for root in ids:
        if root in index_of:
            continue
        index_of[root] = lowlink[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        work: list[tuple[str, Iterable[str]]] = [(root, iter(succ.get(root, ())))]
        while work:
            v, children = work[-1]
            descended = False
            for w in children:
                if w not in index_of:
                    index_of[w] = lowlink[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    descended = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index_of[w])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index_of[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                component.sort(key=position.__getitem__)
                components.append(component)
    components.sort(key=lambda c: position[c[0]])
    return components


def shortest_cycle_through(
    start: str, members: set[str], succ: Mapping[str, Sequence[str]]
) -> tuple[str, ...]:
    """Shortest directed cycle through `start` inside `members`, found by
    BFS. The caller guarantees such a cycle exists. Returned as a node
    sequence whose first and last entries are `start`."""
    parent: dict[str, str] = {}
    dist = {start: 0}
    queue = deque([start])
    best: str | None = None
    while queue:
        v = queue.popleft()
        if best is not None and dist[v] >= dist[best]:
            break
        for w in succ.get(v, ()):
            if w == start:
                if best is None or dist[v] < dist[best]:
                    best = v
            elif w in members and w not in dist:
                dist[w] = dist[v] + 1
                parent[w] = v
                queue.append(w)
    assert best is not None, "no cycle through start"
    path = [best]
    while path[-1] != start:
        path.append(parent[path[-1]])
    path.reverse()
    return tuple(path + [start])
