"""Back-tracking fault localization over the dependency closure.

A symptom at node s is explained by anything s transitively depends on,
i.e. everything reachable from s along dependency edges (edge m -> n reads
"m depends on n", so walking from effect toward cause follows edges
forward). Candidates are ranked critical-first per the rank policy, and
symptoms whose fault cannot have propagated from or to anything else are
flagged independent: such faults sit on the matrix diagonal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import (
    ActivityGraph,
    CyclicScheduleError,
    KIND_CRITICAL,
    KIND_NON_CRITICAL,
    UnknownNodeError,
    scheduling_subgraph,
)
from .matrices import (
    AlreadyClosedError,
    DependencyMatrix,
    DimensionMismatchError,
    NotClosedError,
    condense_sccs,
    dependency_matrix,
    transitive_closure,
)
from .schedule import classify_activities, compute_schedule

VIEW_ALL = "all_edges"
VIEW_SCHEDULING = "scheduling_only"
VIEWS = frozenset({VIEW_ALL, VIEW_SCHEDULING})

RANK_KEYS = ("explains", "critical", "distance", "input_order")


@dataclass(frozen=True)
class RankPolicy:
    """Candidate ordering. The default ranks by explained-symptom count
    (descending), then critical before non-critical, then minimum hop
    distance from a symptom, then node input order; the last key is a
    total order so no ties survive."""

    keys: tuple[str, ...] = RANK_KEYS

    def __post_init__(self):
        if sorted(self.keys) != sorted(RANK_KEYS):
            raise ValueError(f"rank keys must be a permutation of {RANK_KEYS}")


DEFAULT_POLICY = RankPolicy()


@dataclass(frozen=True)
class Candidate:
    node: str
    explains: tuple[str, ...]
    is_critical: bool
    min_distance: int
    scc: int


@dataclass(frozen=True)
class LocalizationReport:
    symptoms: tuple[str, ...]
    candidates: tuple[Candidate, ...]
    independent: tuple[str, ...]
    nodes_examined: int
    policy: RankPolicy
    view: str
    node_ids: tuple[str, ...]


@dataclass(frozen=True)
class AnnotatedMatrix:
    """Raw dependency matrix plus localization marks: independent faults on
    the diagonal, direct symptom->candidate edges as suspect paths."""

    matrix: DependencyMatrix
    independent_marks: tuple[str, ...]
    suspect_cells: tuple[tuple[str, str], ...]


def candidate_set(closure: DependencyMatrix, symptom: str) -> set[str]:
    """The symptom plus everything it transitively depends on."""
    if not closure.closed:
        raise NotClosedError("candidate_set requires a transitive closure")
    row = closure.rows[closure.position(symptom)]
    out = {closure.node_ids[j] for j, v in enumerate(row) if v}
    out.add(symptom)
    return out


def independent_faults(closure: DependencyMatrix, symptoms: tuple[str, ...] | list[str]) -> set[str]:
    """Symptoms that are their own sole explanation.

    A symptom s is independent iff its candidate set is exactly {s} (s
    depends on nothing, so its fault cannot have propagated in) and no
    other symptom's candidate set contains s (s cannot explain anyone
    else's fault). Shared explanations disqualify both sides.
    """
    if not closure.closed:
        raise NotClosedError("independent_faults requires a transitive closure")
    ordered = _check_symptoms(closure.node_ids, symptoms)
    sets = {s: candidate_set(closure, s) for s in ordered}
    independent: set[str] = set()
    for s in ordered:
        if sets[s] != {s}:
            continue
        if any(s in sets[t] for t in ordered if t != s):
            continue
        independent.add(s)
    return independent


def _check_symptoms(known_ids, symptoms) -> tuple[str, ...]:
    ordered = tuple(symptoms)
    if not ordered:
        raise ValueError("symptom set must be non-empty")
    seen: set[str] = set()
    known = set(known_ids)
    for s in ordered:
        if s not in known:
            raise UnknownNodeError(s)
        if s in seen:
            raise ValueError(f"duplicate symptom: {s}")
        seen.add(s)
    return ordered


def _bfs_hops(view: ActivityGraph, start: str) -> dict[str, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for e in view.out_edges(v):
            if e.head not in dist:
                dist[e.head] = dist[v] + 1
                queue.append(e.head)
    return dist


def localize(
    g: ActivityGraph,
    symptoms,
    policy: RankPolicy = DEFAULT_POLICY,
    view: str = VIEW_ALL,
) -> LocalizationReport:
    """Rank root-cause candidates for the observed symptoms.

    The dependency relation comes from all edges or from the scheduling
    subgraph per ``view``. Criticality is always computed on the scheduling
    view; when that view is cyclic and ``view`` is ``all_edges``, declared
    kinds are used instead (with ``scheduling_only`` the cycle is a hard
    error). ``nodes_examined`` counts each distinct node the back-tracking
    traversal visits once: critical nodes are seeded into the worklist
    first, then every symptom's closure is expanded.
    """
    if view not in VIEWS:
        raise ValueError(f"unknown view: {view!r}")
    ordered = _check_symptoms(g.node_ids, symptoms)

    dep_view = scheduling_subgraph(g) if view == VIEW_SCHEDULING else g
    raw = dependency_matrix(dep_view)
    closure = transitive_closure(raw)

    try:
        kinds = classify_activities(g, compute_schedule(g)).kinds
    except CyclicScheduleError:
        if view == VIEW_SCHEDULING:  # pragma: no cover - subgraph raised first
            raise
        kinds = {
            a.id: (KIND_CRITICAL if a.declared_kind == KIND_CRITICAL else KIND_NON_CRITICAL)
            for a in g.activities
        }
    criticals = [v for v in g.node_ids if kinds[v] == KIND_CRITICAL]

    sets = {s: candidate_set(closure, s) for s in ordered}
    union = [v for v in g.node_ids if any(v in sets[s] for s in ordered)]
    hops = {s: _bfs_hops(dep_view, s) for s in ordered}
    condensed = condense_sccs(raw)
    position = {v: i for i, v in enumerate(g.node_ids)}

    candidates = []
    for node in union:
        explains = tuple(s for s in ordered if node in sets[s])
        candidates.append(
            Candidate(
                node=node,
                explains=explains,
                is_critical=kinds[node] == KIND_CRITICAL,
                min_distance=min(hops[s][node] for s in explains),
                scc=condensed.component_of[node],
            )
        )

    def sort_key(c: Candidate):
        parts = {
            "explains": -len(c.explains),
            "critical": 0 if c.is_critical else 1,
            "distance": c.min_distance,
            "input_order": position[c.node],
        }
        return tuple(parts[k] for k in policy.keys)

    ranked = tuple(sorted(candidates, key=sort_key))
    independent = independent_faults(closure, ordered)
    examined = len(set(union) | set(criticals))
    return LocalizationReport(
        symptoms=ordered,
        candidates=ranked,
        independent=tuple(s for s in ordered if s in independent),
        nodes_examined=examined,
        policy=policy,
        view=view,
        node_ids=g.node_ids,
    )


def annotate_matrix(d: DependencyMatrix, report: LocalizationReport) -> AnnotatedMatrix:
    """Mark the raw matrix with the report's findings: independent symptoms
    on the diagonal, each symptom's direct edge to a candidate (always a
    shortest symptom-to-candidate path) as a suspect cell."""
    if d.closed:
        raise AlreadyClosedError("annotation expects the raw matrix, not a closure")
    if d.node_ids != report.node_ids:
        raise DimensionMismatchError(
            "matrix nodes do not match the report's graph: "
            f"{len(d.node_ids)} vs {len(report.node_ids)}"
        )
    candidate_nodes = {c.node for c in report.candidates}
    suspects: list[tuple[str, str]] = []
    for s in report.symptoms:
        row = d.rows[d.position(s)]
        for j, value in enumerate(row):
            head = d.node_ids[j]
            if value and head in candidate_nodes:
                suspects.append((s, head))
    return AnnotatedMatrix(
        matrix=d,
        independent_marks=report.independent,
        suspect_cells=tuple(suspects),
    )
