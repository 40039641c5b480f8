"""Evaluate machine-learning algorithms by frugality: predictive performance traded against resource use."""

__version__ = "0.1.0"

from .evaldata import (
    EvalMatrix,
    EvalRecord,
    ImputationConfig,
    build_matrix,
    fetch_remote_records,
    impute_iterative_svd,
    impute_matrix,
    parse_eval_csv,
    prune_algorithms,
)
from .frugality import (
    FrugalityCurve,
    FrugalityParams,
    RankTable,
    ResourceKind,
    a3r,
    a3r_prime,
    crossing_w,
    frug_score,
    frugality_curve,
    ram_hours,
    rank_algorithms,
    resource_total,
    zero_crossing_w,
)
from .pareto import ParetoFront, ParetoPoint, cluster_averaged_front, column_order, pareto_front, per_dataset_fronts

__all__ = [
    "EvalMatrix", "EvalRecord", "ImputationConfig", "build_matrix", "fetch_remote_records",
    "impute_iterative_svd", "impute_matrix", "parse_eval_csv", "prune_algorithms",
    "FrugalityCurve", "FrugalityParams", "RankTable", "ResourceKind", "a3r", "a3r_prime", "crossing_w",
    "frug_score", "frugality_curve", "ram_hours", "rank_algorithms", "resource_total", "zero_crossing_w",
    "ParetoFront", "ParetoPoint", "cluster_averaged_front", "column_order", "pareto_front", "per_dataset_fronts",
]
