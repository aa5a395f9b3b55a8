"""Seeded fault-injection simulator.

Generates layered activity graphs, injects a root fault, propagates
symptoms to every node that transitively depends on the root (each
detected independently with a fixed probability; the root always
self-detects), and measures how many nodes critical-first localization
examines against an exhaustive scan of all nodes.

Everything is a pure function of its inputs and a 64-bit seed. Per-trial
seeds are positions in the experiment seed's splitmix64 stream
(`rng.derive_seed`), so trials are independent and order-insensitive; the
graph, root-choice and symptom-detection substreams of a trial are derived
the same way from the trial seed (indices 0, 1, 2).
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, replace

from .graph import (
    Activity,
    ActivityEdge,
    ActivityGraph,
    EDGE_DEPENDENCY_ONLY,
    EDGE_SCHEDULING,
    UnknownNodeError,
    build_graph,
)
from .localization import DEFAULT_POLICY, VIEW_ALL, RankPolicy, localize
from .matrices import dependency_matrix, transitive_closure
from .rng import SplitMix64, derive_seed
from .schedule import compute_schedule

ROOT_CRITICAL_ONLY = "critical_only"
ROOT_UNIFORM = "uniform"
ROOT_POLICIES = frozenset({ROOT_CRITICAL_ONLY, ROOT_UNIFORM})

BASELINE_DESCRIPTION = "exhaustive scan of every node"
PROPAGATION_DESCRIPTION = (
    "deterministic reachability over the dependency closure with Bernoulli "
    "detection; the injected root always self-detects"
)


class InvalidParamsError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorParams:
    """Layered-graph generator parameters.

    Nodes are spread over ``layer_count`` contiguous layers; scheduling
    edges join consecutive layers only (each candidate pair independently
    with probability ``edge_density``), so the scheduling view is acyclic
    by construction. Feedback edges are dependency-only, run from a later
    layer back to an earlier one, and may create cycles; their count is
    ``floor(feedback_edge_fraction * scheduling edge count)``.
    """

    node_count: int
    layer_count: int
    edge_density: float
    max_weight: int = 9
    feedback_edge_fraction: float = 0.0
    seed: int = 0

    def check(self) -> None:
        if self.node_count < 1:
            raise InvalidParamsError("node_count must be >= 1")
        if not 1 <= self.layer_count <= self.node_count:
            raise InvalidParamsError("layer_count must be in [1, node_count]")
        if not 0.0 < self.edge_density <= 1.0:
            raise InvalidParamsError("edge_density must be in (0, 1]")
        if self.max_weight < 1:
            raise InvalidParamsError("max_weight must be >= 1")
        if not 0.0 <= self.feedback_edge_fraction < 1.0:
            raise InvalidParamsError("feedback_edge_fraction must be in [0, 1)")
        if not 0 <= self.seed < 2**64:
            raise InvalidParamsError("seed must fit in 64 bits")


@dataclass(frozen=True)
class FaultScenario:
    root: str
    detect_prob: float
    symptoms: tuple[str, ...]
    seed: int


@dataclass(frozen=True)
class TrialMetrics:
    root_rank: int
    candidate_count: int
    nodes_examined_localizer: int
    nodes_examined_baseline: int
    hit: bool


@dataclass(frozen=True)
class TrialRow:
    trial: int
    seed: int
    root: str
    symptom_count: int
    metrics: TrialMetrics


@dataclass(frozen=True)
class ExperimentReport:
    params: GeneratorParams
    trials: int
    detect_prob: float
    root_policy: str
    hit_rate: float
    mean_root_rank: float
    median_root_rank: float
    mean_examined_ratio: float
    rows: tuple[TrialRow, ...]

    def to_json_dict(self) -> dict:
        return {
            "params": {
                "node_count": self.params.node_count,
                "layer_count": self.params.layer_count,
                "edge_density": self.params.edge_density,
                "max_weight": self.params.max_weight,
                "feedback_edge_fraction": self.params.feedback_edge_fraction,
                "seed": self.params.seed,
            },
            "model": {
                "propagation": PROPAGATION_DESCRIPTION,
                "baseline": BASELINE_DESCRIPTION,
            },
            "trials": self.trials,
            "detect_prob": self.detect_prob,
            "root_policy": self.root_policy,
            "aggregates": {
                "hit_rate": self.hit_rate,
                "mean_root_rank": self.mean_root_rank,
                "median_root_rank": self.median_root_rank,
                "mean_examined_ratio": self.mean_examined_ratio,
            },
            "rows": [
                {
                    "trial": r.trial,
                    "seed": r.seed,
                    "root": r.root,
                    "symptoms": r.symptom_count,
                    "candidates": r.metrics.candidate_count,
                    "root_rank": r.metrics.root_rank,
                    "examined_localizer": r.metrics.nodes_examined_localizer,
                    "examined_baseline": r.metrics.nodes_examined_baseline,
                    "hit": r.metrics.hit,
                }
                for r in self.rows
            ],
        }

    def to_csv(self) -> str:
        lines = [
            "trial,seed,root,symptoms,candidates,root_rank,"
            "examined_localizer,examined_baseline,hit"
        ]
        for r in self.rows:
            m = r.metrics
            lines.append(
                f"{r.trial},{r.seed},{r.root},{r.symptom_count},"
                f"{m.candidate_count},{m.root_rank},"
                f"{m.nodes_examined_localizer},{m.nodes_examined_baseline},"
                f"{str(m.hit).lower()}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        p = self.params
        lines = [
            "fault-injection experiment",
            f"  graph: nodes={p.node_count} layers={p.layer_count} "
            f"density={p.edge_density} feedback={p.feedback_edge_fraction} "
            f"wmax={p.max_weight} seed={p.seed}",
            f"  run: trials={self.trials} detect_prob={self.detect_prob} "
            f"root_policy={self.root_policy}",
            f"  propagation model: {PROPAGATION_DESCRIPTION}",
            f"  baseline: {BASELINE_DESCRIPTION}",
            "aggregates:",
            f"  hit_rate={self.hit_rate:.4f}",
            f"  mean_root_rank={self.mean_root_rank:.4f}",
            f"  median_root_rank={self.median_root_rank:.4f}",
            f"  mean_examined_ratio={self.mean_examined_ratio:.4f}",
        ]
        return "\n".join(lines) + "\n"


def generate_graph(params: GeneratorParams) -> ActivityGraph:
    """Deterministic layered activity graph for the given params.

    Node i ("n{i}") sits in layer ``i * layer_count // node_count``. Pair
    and weight draws interleave in a single splitmix64 stream, in node
    order; feedback pairs are then drawn by rejection from the list of all
    later-to-earlier layer pairs.
    """
    params.check()
    rng = SplitMix64(params.seed)
    n = params.node_count
    ids = [f"n{i}" for i in range(n)]
    layer = [i * params.layer_count // n for i in range(n)]

    edges: list[ActivityEdge] = []
    for i in range(n):
        for j in range(i + 1, n):
            if layer[j] != layer[i] + 1:
                continue
            if rng.random() < params.edge_density:
                weight = 1 + rng.below(params.max_weight)
                edges.append(
                    ActivityEdge(f"e{len(edges)}", ids[i], ids[j], weight, EDGE_SCHEDULING)
                )

    back_pairs = [
        (i, j) for i in range(n) for j in range(n) if layer[i] > layer[j]
    ]
    wanted = int(params.feedback_edge_fraction * len(edges))
    chosen: set[int] = set()
    while len(chosen) < min(wanted, len(back_pairs)):
        pick = rng.below(len(back_pairs))
        if pick in chosen:
            continue
        chosen.add(pick)
        i, j = back_pairs[pick]
        weight = 1 + rng.below(params.max_weight)
        edges.append(
            ActivityEdge(f"e{len(edges)}", ids[i], ids[j], weight, EDGE_DEPENDENCY_ONLY)
        )

    return build_graph([Activity(v) for v in ids], edges)


def inject(g: ActivityGraph, root: str, detect_prob: float, seed: int) -> FaultScenario:
    """Propagate a fault at ``root`` to every node that transitively
    depends on it; each affected node except the root joins the symptom
    set independently with probability ``detect_prob`` (one uniform draw
    per affected node, in node order). The root always self-detects."""
    if not g.has_node(root):
        raise UnknownNodeError(root)
    if not 0.0 < detect_prob <= 1.0:
        raise InvalidParamsError("detect_prob must be in (0, 1]")
    closure = transitive_closure(dependency_matrix(g))
    root_col = closure.position(root)
    rng = SplitMix64(seed)
    symptoms: list[str] = []
    for i, node in enumerate(g.node_ids):
        if node == root:
            symptoms.append(node)
        elif closure.rows[i][root_col] and rng.random() < detect_prob:
            symptoms.append(node)
    return FaultScenario(root, detect_prob, tuple(symptoms), seed)


def run_trial(
    g: ActivityGraph, scenario: FaultScenario, policy: RankPolicy = DEFAULT_POLICY
) -> TrialMetrics:
    """Localize the scenario's symptoms (all-edges view) and compare the
    examined-node cost against the exhaustive baseline."""
    report = localize(g, scenario.symptoms, policy=policy, view=VIEW_ALL)
    ranked = [c.node for c in report.candidates]
    hit = scenario.root in ranked
    return TrialMetrics(
        root_rank=ranked.index(scenario.root) + 1 if hit else 0,
        candidate_count=len(ranked),
        nodes_examined_localizer=report.nodes_examined,
        nodes_examined_baseline=len(g.activities),
        hit=hit,
    )


def run_experiment(
    params: GeneratorParams,
    trials: int,
    detect_prob: float,
    root_policy: str = ROOT_CRITICAL_ONLY,
    policy: RankPolicy = DEFAULT_POLICY,
) -> ExperimentReport:
    """Run seeded independent trials and aggregate.

    Trial i derives its seed from the experiment seed, then a fresh graph,
    root choice (uniform over critical nodes or over all nodes) and
    injection stream from the trial seed. The mean examined ratio is
    mean(baseline) / mean(localizer).
    """
    params.check()
    if trials < 1:
        raise InvalidParamsError("trials must be >= 1")
    if not 0.0 < detect_prob <= 1.0:
        raise InvalidParamsError("detect_prob must be in (0, 1]")
    if root_policy not in ROOT_POLICIES:
        raise InvalidParamsError(f"unknown root policy: {root_policy!r}")

    rows: list[TrialRow] = []
    for index in range(trials):
        trial_seed = derive_seed(params.seed, index)
        graph = generate_graph(replace(params, seed=derive_seed(trial_seed, 0)))
        root_rng = SplitMix64(derive_seed(trial_seed, 1))
        if root_policy == ROOT_CRITICAL_ONLY:
            pool = compute_schedule(graph).critical_nodes
        else:
            pool = graph.node_ids
        root = pool[root_rng.below(len(pool))]
        scenario = inject(graph, root, detect_prob, derive_seed(trial_seed, 2))
        metrics = run_trial(graph, scenario, policy)
        rows.append(TrialRow(index, trial_seed, root, len(scenario.symptoms), metrics))

    ranks = [r.metrics.root_rank for r in rows]
    hits = sum(1 for r in rows if r.metrics.hit)
    total_baseline = sum(r.metrics.nodes_examined_baseline for r in rows)
    total_localizer = sum(r.metrics.nodes_examined_localizer for r in rows)
    return ExperimentReport(
        params=params,
        trials=trials,
        detect_prob=detect_prob,
        root_policy=root_policy,
        hit_rate=hits / trials,
        mean_root_rank=statistics.fmean(ranks),
        median_root_rank=float(statistics.median(ranks)),
        mean_examined_ratio=total_baseline / total_localizer,
        rows=tuple(rows),
    )
