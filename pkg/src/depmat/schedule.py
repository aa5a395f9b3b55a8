"""Critical-path schedule over the acyclic scheduling view.

Event times live on nodes, durations on edges: earliest(v) is the longest
scheduling-path distance from any source, latest(v) the latest event time
that still meets the project duration. Zero slack marks a node critical.
All arithmetic is exact integer arithmetic in the graph's declared unit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import (
    ActivityGraph,
    CyclicScheduleError,
    KIND_AUTO,
    KIND_CRITICAL,
    KIND_NON_CRITICAL,
    SCHEDULING_KINDS,
    scheduling_subgraph,
)


class EmptyGraphError(ValueError):
    pass


@dataclass(frozen=True)
class Schedule:
    """Earliest/latest event times, slack, project duration, the critical
    node set (input order) and every critical path (lexicographic by node
    input position)."""

    earliest: dict[str, int]
    latest: dict[str, int]
    slack: dict[str, int]
    duration: int
    critical_nodes: tuple[str, ...]
    paths: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class Classification:
    """Final critical/non-critical class per node; ``overrides`` lists the
    nodes whose declared kind changed the computed class."""

    kinds: dict[str, str]
    overrides: tuple[str, ...]


def _scheduling_edges(g: ActivityGraph):
    return [e for e in g.edges if e.kind in SCHEDULING_KINDS]


def _topological_order(g: ActivityGraph) -> list[str]:
    edges = _scheduling_edges(g)
    indegree = {v: 0 for v in g.node_ids}
    succ: dict[str, list[str]] = {v: [] for v in g.node_ids}
    for e in edges:
        indegree[e.head] += 1
        succ[e.tail].append(e.head)
    ready = deque(v for v in g.node_ids if indegree[v] == 0)
    order: list[str] = []
    while ready:
        v = ready.popleft()
        order.append(v)
        for w in succ[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                ready.append(w)
    if len(order) != len(g.node_ids):
        scheduling_subgraph(g)  # raises CyclicScheduleError with a witness
        raise CyclicScheduleError(())  # unreachable
    return order


def forward_pass(g: ActivityGraph) -> dict[str, int]:
    """Earliest event times: longest scheduling-path distance from the
    sources (sources start at 0). Node input order is preserved."""
    order = _topological_order(g)
    earliest = {v: 0 for v in g.node_ids}
    for v in order:
        for e in g.out_edges(v):
            if e.kind in SCHEDULING_KINDS:
                candidate = earliest[v] + e.weight
                if candidate > earliest[e.head]:
                    earliest[e.head] = candidate
    return {v: earliest[v] for v in g.node_ids}


def backward_pass(g: ActivityGraph, duration: int) -> dict[str, int]:
    """Latest event times; every sink is seeded with the project duration."""
    order = _topological_order(g)
    latest = {v: duration for v in g.node_ids}
    for v in reversed(order):
        for e in g.out_edges(v):
            if e.kind in SCHEDULING_KINDS:
                candidate = latest[e.head] - e.weight
                if candidate < latest[v]:
                    latest[v] = candidate
    return {v: latest[v] for v in g.node_ids}


def compute_schedule(g: ActivityGraph) -> Schedule:
    """Full critical-path analysis of the scheduling view.

    Raises EmptyGraphError for node-less graphs and CyclicScheduleError when
    the scheduling view is cyclic.
    """
    if not g.activities:
        raise EmptyGraphError("cannot schedule a graph with no activities")
    view = scheduling_subgraph(g)
    earliest = forward_pass(view)
    duration = max(earliest.values())
    latest = backward_pass(view, duration)
    slack = {v: latest[v] - earliest[v] for v in view.node_ids}
    critical = tuple(v for v in view.node_ids if slack[v] == 0)
    paths = _critical_paths(view, earliest, slack, duration)
    return Schedule(earliest, latest, slack, duration, critical, paths)


def _critical_paths(
    view: ActivityGraph,
    earliest: dict[str, int],
    slack: dict[str, int],
    duration: int,
) -> tuple[tuple[str, ...], ...]:
    """Enumerate every source->sink path of zero-slack nodes whose tight
    edges sum to the duration, depth-first in node input order."""
    position = {v: i for i, v in enumerate(view.node_ids)}
    outdeg = {v: len(view.out_edges(v)) for v in view.node_ids}
    indeg = {v: 0 for v in view.node_ids}
    for e in view.edges:
        indeg[e.head] += 1

    def tight_successors(v: str) -> list[str]:
        heads = {
            e.head
            for e in view.out_edges(v)
            if slack[e.head] == 0 and earliest[v] + e.weight == earliest[e.head]
        }
        return sorted(heads, key=position.__getitem__)

    starts = [v for v in view.node_ids if indeg[v] == 0 and slack[v] == 0]
    paths: list[tuple[str, ...]] = []
    for start in starts:
        stack: list[tuple[str, tuple[str, ...]]] = [(start, (start,))]
        while stack:
            v, acc = stack.pop()
            if outdeg[v] == 0:
                if earliest[v] == duration:
                    paths.append(acc)
                continue
            for head in reversed(tight_successors(v)):
                stack.append((head, acc + (head,)))
    return tuple(paths)


def classify_activities(g: ActivityGraph, schedule: Schedule) -> Classification:
    """Zero slack classifies a node critical; a non-auto declared kind is
    applied last, and listed as an override when it flips the computed
    class."""
    kinds: dict[str, str] = {}
    overrides: list[str] = []
    for a in g.activities:
        computed = KIND_CRITICAL if schedule.slack[a.id] == 0 else KIND_NON_CRITICAL
        if a.declared_kind != KIND_AUTO and a.declared_kind != computed:
            kinds[a.id] = a.declared_kind
            overrides.append(a.id)
        else:
            kinds[a.id] = computed
    return Classification(kinds, tuple(overrides))
