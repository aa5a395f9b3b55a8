import random

import pytest

from depmat.graph import (
    Activity,
    ActivityEdge,
    ActivityGraph,
    CyclicScheduleError,
    EDGE_DEPENDENCY_ONLY,
    EDGE_DUMMY,
    GraphBuildError,
    SCHEDULING_KINDS,
    build_graph,
    scheduling_subgraph,
    strongly_connected_components,
    validate,
)

from oracles import graph_succ, has_cycle, random_mixed_graph


def codes(exc_or_report):
    issues = exc_or_report.issues
    return {i.code for i in issues}


def test_build_robot_fixture(robot):
    assert [a.id for a in robot.activities] == ["v0", "v1", "v2", "v3", "v4"]
    assert [e.id for e in robot.edges] == list("abcdefghi")
    assert robot.unit == "s"
    assert robot.out_edges("v3")[0].head == "v1"


def test_build_single_node():
    g = build_graph([Activity("v0")], [])
    assert g.node_ids == ("v0",)
    assert g.edges == ()


def test_build_rejects_self_loop():
    with pytest.raises(GraphBuildError) as exc:
        build_graph([Activity("v0")], [ActivityEdge("x", "v0", "v0", 1)])
    assert "self-loop" in codes(exc.value)


def test_build_rejects_duplicate_ids():
    with pytest.raises(GraphBuildError) as exc:
        build_graph([Activity("v0"), Activity("v0")], [])
    assert "duplicate-id" in codes(exc.value)
    with pytest.raises(GraphBuildError) as exc:
        build_graph(
            [Activity("v0"), Activity("v1")],
            [ActivityEdge("x", "v0", "v1", 1), ActivityEdge("x", "v1", "v0", 1)],
        )
    assert "duplicate-id" in codes(exc.value)


def test_build_rejects_unknown_endpoint():
    with pytest.raises(GraphBuildError) as exc:
        build_graph([Activity("v0")], [ActivityEdge("x", "v0", "zz", 1)])
    assert "unknown-endpoint" in codes(exc.value)


def test_build_rejects_bad_weights():
    nodes = [Activity("v0"), Activity("v1")]
    with pytest.raises(GraphBuildError) as exc:
        build_graph(nodes, [ActivityEdge("x", "v0", "v1", -1)])
    assert "negative-weight" in codes(exc.value)
    with pytest.raises(GraphBuildError) as exc:
        build_graph(nodes, [ActivityEdge("x", "v0", "v1", 1.5)])
    assert "invalid-weight" in codes(exc.value)
    with pytest.raises(GraphBuildError) as exc:
        build_graph(nodes, [ActivityEdge("x", "v0", "v1", True)])
    assert "invalid-weight" in codes(exc.value)


def test_build_rejects_nonzero_dummy():
    with pytest.raises(GraphBuildError) as exc:
        build_graph(
            [Activity("v0"), Activity("v1")],
            [ActivityEdge("x", "v0", "v1", 3, EDGE_DUMMY)],
        )
    assert "dummy-nonzero" in codes(exc.value)


def test_build_accepts_zero_weight_dummy():
    g = build_graph(
        [Activity("v0"), Activity("v1")],
        [ActivityEdge("x", "v0", "v1", 0, EDGE_DUMMY)],
    )
    assert g.edges[0].kind == EDGE_DUMMY


def test_build_rejects_bad_id_tokens():
    with pytest.raises(GraphBuildError) as exc:
        build_graph([Activity("0abc")], [])
    assert "invalid-id" in codes(exc.value)
    with pytest.raises(GraphBuildError) as exc:
        build_graph([Activity("")], [])
    assert "invalid-id" in codes(exc.value)


def test_build_rejects_unknown_kinds():
    with pytest.raises(GraphBuildError) as exc:
        build_graph([Activity("v0", declared_kind="weird")], [])
    assert "invalid-kind" in codes(exc.value)


def test_build_collects_all_errors():
    with pytest.raises(GraphBuildError) as exc:
        build_graph(
            [Activity("v0"), Activity("v0")],
            [ActivityEdge("x", "v0", "v0", -2)],
        )
    assert {"duplicate-id", "self-loop", "negative-weight"} <= codes(exc.value)


def test_scheduling_subgraph_robot(robot):
    sub = scheduling_subgraph(robot)
    assert [e.id for e in sub.edges] == list("abcdefg")
    assert sub.activities == robot.activities
    assert sub.unit == robot.unit


def test_scheduling_subgraph_no_edges_identity():
    g = build_graph([Activity("v0"), Activity("v1")], [])
    assert scheduling_subgraph(g) == g


def test_scheduling_subgraph_two_cycle():
    g = build_graph(
        [Activity("v0"), Activity("v1")],
        [ActivityEdge("x", "v0", "v1", 1), ActivityEdge("y", "v1", "v0", 1)],
    )
    with pytest.raises(CyclicScheduleError) as exc:
        scheduling_subgraph(g)
    cycle = exc.value.cycle
    assert cycle[0] == cycle[-1]
    assert set(cycle) == {"v0", "v1"}
    assert "scheduling cycle" in str(exc.value)


def test_scheduling_subgraph_ignores_dependency_only_cycles(robot):
    scheduling_subgraph(robot)  # h and i close cycles but are dependency_only


def test_validate_robot(robot):
    report = validate(robot)
    assert report.ok
    messages = [i.message for i in report.warnings]
    assert "dependency-only cycle: v0->v4->v0" in messages
    assert "multiple sinks in scheduling view: v3, v4" in messages
    assert not any(i.code == "multiple-sources" for i in report.warnings)


def test_validate_empty_graph():
    report = validate(ActivityGraph((), ()))
    assert report.ok
    assert report.issues == ()


def test_validate_unknown_endpoint_not_ok():
    g = ActivityGraph((Activity("v0"),), (ActivityEdge("x", "v0", "zz", 1),))
    report = validate(g)
    assert not report.ok
    assert "unknown-endpoint" in {i.code for i in report.errors}


def test_validate_isolated_node():
    g = build_graph(
        [Activity("v0"), Activity("v1"), Activity("v2")],
        [ActivityEdge("x", "v0", "v1", 1)],
    )
    report = validate(g)
    assert any(i.code == "isolated-node" and i.ids == ("v2",) for i in report.warnings)


def test_validate_scheduling_cycle_warning():
    g = build_graph(
        [Activity("v0"), Activity("v1")],
        [ActivityEdge("x", "v0", "v1", 1), ActivityEdge("y", "v1", "v0", 2)],
    )
    report = validate(g)
    assert report.ok
    assert any(i.code == "scheduling-cycle" for i in report.warnings)


def test_validate_dependency_only_cycle_witness():
    g = build_graph(
        [Activity("a"), Activity("b")],
        [
            ActivityEdge("x", "a", "b", 1),
            ActivityEdge("y", "b", "a", 1, EDGE_DEPENDENCY_ONLY),
        ],
    )
    report = validate(g)
    assert any(
        i.code == "dependency-only-cycle" and i.message == "dependency-only cycle: a->b->a"
        for i in report.warnings
    )


def test_subgraph_matches_kind_filter_and_oracle():
    for seed in range(200):
        rnd = random.Random(seed)
        g = random_mixed_graph(rnd)
        expected_edges = tuple(e for e in g.edges if e.kind in SCHEDULING_KINDS)
        succ = graph_succ(g, SCHEDULING_KINDS)
        assert not has_cycle(g.node_ids, succ)
        sub = scheduling_subgraph(g)
        assert sub.edges == expected_edges
        assert sub.activities == g.activities


def test_scheduling_subgraph_agrees_with_cycle_oracle():
    # over arbitrary digraphs: subgraph succeeds iff the filtered edges are acyclic
    for seed in range(200):
        rnd = random.Random(10_000 + seed)
        n = rnd.randint(1, 10)
        nodes = [Activity(f"n{i}") for i in range(n)]
        edges = []
        for i in range(n):
            for j in range(n):
                if i != j and rnd.random() < 0.25:
                    edges.append(ActivityEdge(f"e{len(edges)}", f"n{i}", f"n{j}", rnd.randint(0, 9)))
        g = build_graph(nodes, edges)
        cyclic = has_cycle(g.node_ids, graph_succ(g, SCHEDULING_KINDS))
        if cyclic:
            with pytest.raises(CyclicScheduleError):
                scheduling_subgraph(g)
        else:
            scheduling_subgraph(g)


def test_strongly_connected_components_partition():
    ids = ["a", "b", "c", "d"]
    succ = {"a": ["b"], "b": ["a"], "c": ["d"], "d": []}
    comps = strongly_connected_components(ids, succ)
    assert comps == [["a", "b"], ["c"], ["d"]]


def test_graph_is_immutable(robot):
    with pytest.raises(Exception):
        robot.unit = "h"
