"""Non-dominated fronts over (AUC, combined time).

A point dominates another when its AUC is at least as high and its time at
least as low, with one of the two strictly better. Exact duplicates keep the
lexicographically smallest algorithm id.
"""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .evaldata import EvalMatrix
from .frugality import R_FLOOR_MS


@dataclass(frozen=True)
class ParetoPoint:
    algorithm_id: str
    auc: float
    time_ms: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.auc) and math.isfinite(self.time_ms)):
            raise ValueError(f"non-finite coordinates for {self.algorithm_id}")
        if not self.time_ms > 0:
            raise ValueError(f"time_ms must be > 0 for {self.algorithm_id}")


@dataclass(frozen=True)
class ParetoFront:
    """Front points sorted by ascending time (hence strictly ascending AUC)."""

    points: tuple[ParetoPoint, ...]

    @property
    def ids(self) -> list[str]:
        return [p.algorithm_id for p in self.points]

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, algorithm_id: object) -> bool:
        return any(p.algorithm_id == algorithm_id for p in self.points)


def dominates(p: ParetoPoint, q: ParetoPoint) -> bool:
    return (p.auc >= q.auc and p.time_ms <= q.time_ms
            and (p.auc > q.auc or p.time_ms < q.time_ms))


def pareto_front(points: Iterable[ParetoPoint]) -> ParetoFront:
    """Sort-and-sweep front in O(n log n)."""
    pts = list(points)
    if not pts:
        raise ValueError("cannot build a Pareto front from no points")
    # fastest first; among equal times highest AUC first; then id for duplicates
    pts.sort(key=lambda p: (p.time_ms, -p.auc, p.algorithm_id))
    front = []
    best = -math.inf
    for p in pts:
        if p.auc > best:
            front.append(p)
            best = p.auc
    return ParetoFront(tuple(front))


def _row_points(algorithms: Sequence[str], auc: np.ndarray, time_ms: np.ndarray) -> list[ParetoPoint]:
    return [ParetoPoint(a, float(x), float(max(t, R_FLOOR_MS))) for a, x, t in zip(algorithms, auc, time_ms)]


def per_dataset_fronts(matrix: EvalMatrix) -> dict[str, ParetoFront]:
    matrix.require_complete("per-dataset Pareto fronts")
    total = matrix.total_ms()
    return {d: pareto_front(_row_points(matrix.algorithms, matrix.auc[i], total[i]))
            for i, d in enumerate(matrix.datasets)}


def averaged_points(matrix: EvalMatrix, datasets: Sequence[str] | None = None) -> list[ParetoPoint]:
    """Each algorithm reduced to (mean AUC, mean time) over the given datasets."""
    sub = matrix if datasets is None else matrix.select(datasets=datasets)
    return _row_points(sub.algorithms, sub.auc.mean(axis=0), sub.total_ms().mean(axis=0))


def _as_mapping(assignment) -> Mapping[str, int]:
    if isinstance(assignment, Mapping):
        return assignment
    return dict(zip(assignment.ids, (int(x) for x in assignment.labels)))


def cluster_averaged_front(matrix: EvalMatrix, assignment) -> dict[int, ParetoFront]:
    """Front per cluster over algorithm means across the cluster's datasets.

    ``assignment`` is a :class:`~frugalml.metaspace.ClusterAssignment` over
    dataset ids or a plain ``{dataset_id: cluster}`` mapping.
    """
    matrix.require_complete("cluster-averaged Pareto fronts")
    mapping = _as_mapping(assignment)
    members: dict[int, list[str]] = defaultdict(list)
    for d in matrix.datasets:
        if d not in mapping:
            raise ValueError(f"dataset {d} has no cluster assignment")
        members[int(mapping[d])].append(d)
    return {c: pareto_front(averaged_points(matrix, members[c])) for c in sorted(members)}


def column_order(matrix: EvalMatrix) -> list[str]:
    """Heat-map column order: global front by ascending AUC, then the rest by ascending mean AUC."""
    matrix.require_complete("column ordering")
    pts = averaged_points(matrix)
    front = pareto_front(pts)
    on_front = set(front.ids)
    rest = sorted((p for p in pts if p.algorithm_id not in on_front), key=lambda p: (p.auc, p.algorithm_id))
    return front.ids + [p.algorithm_id for p in rest]


def format_fronts_csv(groups: Mapping[object, tuple[Sequence[ParetoPoint], ParetoFront]]) -> str:
    """Rows ``cluster_or_dataset,algorithm_id,auc,time_ms,on_front`` for every point of every group."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["cluster_or_dataset", "algorithm_id", "auc", "time_ms", "on_front"])
    for key, (points, front) in groups.items():
        ids = set(front.ids)
        for p in sorted(points, key=lambda p: (p.time_ms, -p.auc, p.algorithm_id)):
            writer.writerow([key, p.algorithm_id, repr(p.auc), repr(p.time_ms), int(p.algorithm_id in ids)])
    return buf.getvalue()
