import random

import pytest

from depmat.graph import (
    Activity,
    ActivityEdge,
    CyclicScheduleError,
    EDGE_DUMMY,
    KIND_CRITICAL,
    KIND_NON_CRITICAL,
    build_graph,
    scheduling_subgraph,
)
from depmat.matrices import dependency_matrix, transitive_closure
from depmat.schedule import (
    EmptyGraphError,
    backward_pass,
    classify_activities,
    compute_schedule,
    forward_pass,
)

from oracles import cpm_by_enumeration, random_dag


def test_forward_pass_robot(robot):
    view = scheduling_subgraph(robot)
    assert forward_pass(view) == {"v0": 0, "v1": 2, "v2": 9, "v3": 15, "v4": 14}


def test_backward_pass_robot(robot):
    view = scheduling_subgraph(robot)
    assert backward_pass(view, 15) == {"v0": 0, "v1": 2, "v2": 9, "v3": 15, "v4": 15}


def test_passes_trivial_cases():
    single = build_graph([Activity("v0")], [])
    assert forward_pass(single) == {"v0": 0}
    assert backward_pass(single, 0) == {"v0": 0}
    chain = build_graph(
        [Activity("v0"), Activity("v1"), Activity("v2")],
        [ActivityEdge("x", "v0", "v1", 2), ActivityEdge("y", "v1", "v2", 3)],
    )
    assert forward_pass(chain) == {"v0": 0, "v1": 2, "v2": 5}
    assert backward_pass(chain, 5) == {"v0": 0, "v1": 2, "v2": 5}


def test_forward_pass_rejects_cycle():
    g = build_graph(
        [Activity("v0"), Activity("v1")],
        [ActivityEdge("x", "v0", "v1", 1), ActivityEdge("y", "v1", "v0", 1)],
    )
    with pytest.raises(CyclicScheduleError):
        forward_pass(g)


def test_schedule_robot(robot):
    s = compute_schedule(robot)
    assert s.duration == 15
    assert s.critical_nodes == ("v0", "v1", "v2", "v3")
    assert s.slack == {"v0": 0, "v1": 0, "v2": 0, "v3": 0, "v4": 1}
    assert s.paths == (("v0", "v1", "v2", "v3"),)


def test_schedule_single_node():
    s = compute_schedule(build_graph([Activity("v0")], []))
    assert s.duration == 0
    assert s.critical_nodes == ("v0",)
    assert s.paths == (("v0",),)


def test_schedule_diamond_two_critical_paths():
    g = build_graph(
        [Activity("v0"), Activity("v1"), Activity("v2"), Activity("v3")],
        [
            ActivityEdge("a", "v0", "v1", 5),
            ActivityEdge("b", "v0", "v2", 5),
            ActivityEdge("c", "v1", "v3", 1),
            ActivityEdge("d", "v2", "v3", 1),
        ],
    )
    s = compute_schedule(g)
    assert s.duration == 6
    assert s.critical_nodes == ("v0", "v1", "v2", "v3")
    assert s.paths == (("v0", "v1", "v3"), ("v0", "v2", "v3"))


def test_schedule_empty_graph():
    with pytest.raises(EmptyGraphError):
        compute_schedule(build_graph([], []))


def test_schedule_cyclic_scheduling_view():
    g = build_graph(
        [Activity("v0"), Activity("v1")],
        [ActivityEdge("x", "v0", "v1", 1), ActivityEdge("y", "v1", "v0", 1)],
    )
    with pytest.raises(CyclicScheduleError):
        compute_schedule(g)


def test_classify_robot(robot):
    c = classify_activities(robot, compute_schedule(robot))
    assert c.kinds == {
        "v0": KIND_CRITICAL,
        "v1": KIND_CRITICAL,
        "v2": KIND_CRITICAL,
        "v3": KIND_CRITICAL,
        "v4": KIND_NON_CRITICAL,
    }
    assert c.overrides == ()


def test_classify_all_zero_weights():
    g = build_graph(
        [Activity("v0"), Activity("v1")],
        [ActivityEdge("x", "v0", "v1", 0)],
    )
    c = classify_activities(g, compute_schedule(g))
    assert set(c.kinds.values()) == {KIND_CRITICAL}


def test_classify_override_is_flagged(robot):
    activities = [
        Activity(a.id, a.label, KIND_CRITICAL if a.id == "v4" else a.declared_kind)
        for a in robot.activities
    ]
    g = build_graph(activities, robot.edges, unit=robot.unit)
    s = compute_schedule(g)
    assert s.critical_nodes == ("v0", "v1", "v2", "v3")  # schedule itself unchanged
    c = classify_activities(g, s)
    assert c.kinds["v4"] == KIND_CRITICAL
    assert c.overrides == ("v4",)


def test_matching_declaration_is_not_an_override(robot):
    activities = [
        Activity(a.id, a.label, KIND_CRITICAL if a.id == "v0" else a.declared_kind)
        for a in robot.activities
    ]
    g = build_graph(activities, robot.edges, unit=robot.unit)
    c = classify_activities(g, compute_schedule(g))
    assert c.overrides == ()


def test_schedule_matches_enumeration_oracle():
    for seed in range(60):
        g = random_dag(random.Random(seed))
        duration, earliest, latest, critical = cpm_by_enumeration(g)
        s = compute_schedule(g)
        assert s.duration == duration
        assert s.earliest == earliest
        assert s.latest == latest
        assert set(s.critical_nodes) == critical


def test_duration_monotone_in_edge_weights():
    for seed in range(100):
        rnd = random.Random(40_000 + seed)
        g = random_dag(rnd)
        if not g.edges:
            continue
        base = compute_schedule(g).duration
        bump = rnd.randrange(len(g.edges))
        edges = [
            ActivityEdge(e.id, e.tail, e.head, e.weight + (3 if i == bump else 0), e.kind)
            for i, e in enumerate(g.edges)
        ]
        assert compute_schedule(build_graph(g.activities, edges)).duration >= base


def test_precedence_consistent_dummy_edges_are_neutral():
    # a dummy edge whose tail is not scheduled after its head never moves the
    # duration and can only add zero-slack nodes
    added = 0
    for seed in range(200):
        rnd = random.Random(50_000 + seed)
        g = random_dag(rnd)
        s = compute_schedule(g)
        closure = transitive_closure(dependency_matrix(g))
        nodes = g.node_ids
        pairs = [
            (u, v)
            for u in nodes
            for v in nodes
            if u != v
            and s.earliest[u] <= s.earliest[v]
            and not closure.entry(v, u)  # adding u -> v must not close a cycle
        ]
        if not pairs:
            continue
        u, v = pairs[rnd.randrange(len(pairs))]
        edges = list(g.edges) + [ActivityEdge("dummy0", u, v, 0, EDGE_DUMMY)]
        s2 = compute_schedule(build_graph(g.activities, edges))
        assert s2.duration == s.duration
        assert set(s2.critical_nodes) >= set(s.critical_nodes)
        added += 1
    assert added > 100


def test_critical_paths_sum_to_duration():
    for seed in range(100):
        g = random_dag(random.Random(60_000 + seed))
        s = compute_schedule(g)
        weight = {}
        for e in g.edges:
            key = (e.tail, e.head)
            weight[key] = max(weight.get(key, 0), e.weight)
        for path in s.paths:
            total = sum(weight[(path[i], path[i + 1])] for i in range(len(path) - 1))
            assert total == s.duration
            assert all(s.slack[v] == 0 for v in path)
