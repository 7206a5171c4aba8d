"""Homophily analysis, homophily-targeted rewiring and fairness metrics for labeled graphs."""

from ._hetfair import (
    BetaGoal,
    Edge,
    GenerationReport,
    Graph,
    Histogram,
    NodeTable,
    SplitAssignment,
    TheoryParams,
    beta_goal_histogram,
    emd,
    expected_logit_gap,
    generate,
    global_homophily,
    histogram,
    load_edge_list,
    load_node_table,
    local_homophily,
    micro_f1,
    monte_carlo_gap,
    multiclass_sp,
    planted_partition,
    statistical_parity,
    stratified_split,
)

__all__ = [
    "BetaGoal",
    "Edge",
    "GenerationReport",
    "Graph",
    "Histogram",
    "NodeTable",
    "SplitAssignment",
    "TheoryParams",
    "beta_goal_histogram",
    "emd",
    "expected_logit_gap",
    "generate",
    "global_homophily",
    "histogram",
    "load_edge_list",
    "load_node_table",
    "local_homophily",
    "micro_f1",
    "monte_carlo_gap",
    "multiclass_sp",
    "planted_partition",
    "statistical_parity",
    "stratified_split",
]
