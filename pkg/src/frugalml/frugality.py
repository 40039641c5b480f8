"""Frugality score, A3R measures, frugality curves and w-indexed rankings.

The frugality score of an algorithm with predictive performance ``P`` and
resource consumption ``R`` under trade-off weight ``w`` is::

    P - w / (1 + 1/R)

which is affine in ``w`` with intercept ``P`` and slope ``-R/(1+R)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .evaldata import EvalMatrix

#: R is clamped to at least this many milliseconds.
R_FLOOR_MS = 1e-3
MS_PER_HOUR = 3_600_000.0


class ResourceKind(str, Enum):
    CPU_TIME_MS = "cpu_time_ms"
    RAM_HOURS = "ram_hours"


@dataclass(frozen=True)
class FrugalityParams:
    w: float = 0.0
    resource_kind: ResourceKind = ResourceKind.CPU_TIME_MS

    def __post_init__(self) -> None:
        if not w_ok(self.w):
            raise DomainError(f"w must be a finite value >= 0, got {self.w}")
        object.__setattr__(self, "resource_kind", ResourceKind(self.resource_kind))


def w_ok(w: float) -> bool:
    return math.isfinite(w) and w >= 0


def _check_nonneg(**kw: float) -> None:
    for name, v in kw.items():
        if not (math.isfinite(v) and v >= 0):
            raise DomainError(f"{name} must be >= 0, got {v}")


def _check_pos(**kw: float) -> None:
    for name, v in kw.items():
        if not (v > 0):
            raise DomainError(f"{name} must be > 0, got {v}")


def resource_total(train_ms: float, test_ms: float) -> float:
    """Combined train + test time in ms, clamped to the 0.001 ms floor."""
    _check_nonneg(train_ms=train_ms, test_ms=test_ms)
    return max(train_ms + test_ms, R_FLOOR_MS)


def ram_hours(ram_gb: float, cpu_hours: float) -> float:
    _check_nonneg(ram_gb=ram_gb, cpu_hours=cpu_hours)
    return ram_gb * cpu_hours


def frug_score(P: float, w: float, R: float) -> float:
    """``P - w / (1 + 1/R)``."""
    if not R > 0:
        raise DomainError(f"R must be > 0, got {R}")
    return P - w / (1.0 + 1.0 / R)


def frug_score_sigmoid(P: float, w: float, R: float) -> float:
    """Same score written as ``P - w * sigmoid(ln R)``."""
    if not R > 0:
        raise DomainError(f"R must be > 0, got {R}")
    return P - w * (1.0 / (1.0 + math.exp(-math.log(R))))


def penalty_coefficient(R):
    """``R / (1 + R)``, the per-unit-w penalty; accepts scalars or arrays."""
    return R / (1.0 + R)


def a3r(sr_j: float, sr_ref: float, t_j: float, t_ref: float, N: int) -> float:
    """Adjusted ratio of ratios against a reference algorithm."""
    _check_pos(sr_j=sr_j, sr_ref=sr_ref, t_j=t_j, t_ref=t_ref, N=N)
    return (sr_j / sr_ref) / (t_j / t_ref) ** (1.0 / N)


def a3r_prime(sr: float, t: float, N: int) -> float:
    """A3R with the reference success rate and time fixed to 1."""
    _check_pos(sr=sr, t=t, N=N)
    return sr / t ** (1.0 / N)


# --------------------------------------------------------------------------- curves


@dataclass(frozen=True)
class FrugalityCurve:
    algorithm_id: str
    intercept: float
    slope: float
    points: tuple[tuple[float, float], ...]

    def score(self, w: float) -> float:
        return self.intercept + self.slope * w

    @property
    def grid(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.points)


def _check_grid(w_grid: Sequence[float]) -> list[float]:
    grid = [float(w) for w in w_grid]
    if not grid:
        raise ValueError("w grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("w grid must be ascending")
    return grid


def frugality_curve(P: float, R: float, w_grid: Sequence[float], algorithm_id: str = "") -> FrugalityCurve:
    grid = _check_grid(w_grid)
    if not R > 0:
        raise DomainError(f"R must be > 0, got {R}")
    slope = -penalty_coefficient(R)
    return FrugalityCurve(algorithm_id, P, slope, tuple((w, P + slope * w) for w in grid))


def curve_from_line(algorithm_id: str, intercept: float, slope: float, w_grid: Sequence[float]) -> FrugalityCurve:
    grid = _check_grid(w_grid)
    return FrugalityCurve(algorithm_id, intercept, slope, tuple((w, intercept + slope * w) for w in grid))


def w_sweep(start: float = 0.0, end: float = 1.0, step: float = 0.05) -> list[float]:
    """Inclusive grid ``start, start+step, ..., end`` rounded to 12 decimals."""
    if step <= 0:
        raise ValueError("step must be > 0")
    if end < start:
        raise ValueError("sweep end must be >= start")
    n = int(math.floor((end - start) / step + 1e-9))
    grid = [round(start + i * step, 12) for i in range(n + 1)]
    if end - grid[-1] > 1e-9:
        grid.append(end)
    return grid


def line_crossing(intercept_a: float, slope_a: float, intercept_b: float, slope_b: float) -> float | None:
    """Non-negative w where two affine curves meet, or None."""
    if slope_a == slope_b:
        return None
    w = (intercept_a - intercept_b) / (slope_b - slope_a)
    return w if w >= 0 else None


def crossing_w(P_a: float, R_a: float, P_b: float, R_b: float) -> float | None:
    """w at which algorithm a's and b's frugality scores are equal."""
    if not (R_a > 0 and R_b > 0):
        raise DomainError("R must be > 0")
    c_a, c_b = penalty_coefficient(R_a), penalty_coefficient(R_b)
    if c_a == c_b:
        return None
    w = (P_a - P_b) / (c_a - c_b)
    return w if w >= 0 else None


def zero_crossing_w(P: float, R: float) -> float:
    """w where the frugality score reaches 0: ``P (1+R) / R``."""
    _check_pos(P=P, R=R)
    return P * (1.0 + R) / R


def pairwise_crossings(curves: Sequence[FrugalityCurve], w_max: float | None = None) -> list[tuple[str, str, float]]:
    out = []
    for i, a in enumerate(curves):
        for b in curves[i + 1:]:
            w = line_crossing(a.intercept, a.slope, b.intercept, b.slope)
            if w is not None and (w_max is None or w <= w_max):
                out.append((a.algorithm_id, b.algorithm_id, w))
    return out


# --------------------------------------------------------------------------- matrices


def resource_matrix(matrix: EvalMatrix, kind: ResourceKind | str = ResourceKind.CPU_TIME_MS,
                    ram_gb: float = 1.0) -> np.ndarray:
    """Per-cell resource consumption R (> 0).

    ``cpu_time_ms`` is the clamped train + test time; ``ram_hours`` multiplies
    a fixed RAM footprint in GB by that time in hours.
    """
    kind = ResourceKind(kind)
    total = np.maximum(matrix.train_ms + matrix.test_ms, R_FLOOR_MS)
    if kind is ResourceKind.CPU_TIME_MS:
        return total
    if not ram_gb > 0:
        raise DomainError("ram_gb must be > 0 for ram_hours")
    return ram_gb * total / MS_PER_HOUR


def score_matrix(matrix: EvalMatrix, w: float, kind: ResourceKind | str = ResourceKind.CPU_TIME_MS,
                 ram_gb: float = 1.0) -> np.ndarray:
    """Frugality score of every cell at weight ``w``."""
    matrix.require_complete("scoring")
    if not w_ok(w):
        raise DomainError(f"w must be >= 0, got {w}")
    R = resource_matrix(matrix, kind, ram_gb)
    return matrix.auc - w / (1.0 + 1.0 / R)


@dataclass(frozen=True)
class RankTable:
    w: float
    rows: tuple[tuple[str, float], ...]

    @property
    def order(self) -> list[str]:
        return [a for a, _ in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rank", "algorithm_id", "score"])
        for i, (a, s) in enumerate(self.rows, 1):
            writer.writerow([i, a, repr(float(s))])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"w": self.w, "rows": [{"rank": i, "algorithm_id": a, "score": s} for i, (a, s) in enumerate(self.rows, 1)]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def rank_algorithms(matrix: EvalMatrix, w: float, kind: ResourceKind | str = ResourceKind.CPU_TIME_MS,
                    ram_gb: float = 1.0) -> RankTable:
    """Rank algorithms by mean frugality score over datasets (descending, ties by id)."""
    scores = score_matrix(matrix, w, kind, ram_gb)
    means = scores.mean(axis=0) if scores.shape[0] else np.zeros(scores.shape[1])
    rows = sorted(zip(matrix.algorithms, (float(m) for m in means)), key=lambda t: (-t[1], t[0]))
    return RankTable(float(w), tuple(rows))


def mean_curves(matrix: EvalMatrix, w_grid: Sequence[float], datasets: Sequence[str] | None = None,
                kind: ResourceKind | str = ResourceKind.CPU_TIME_MS, ram_gb: float = 1.0) -> list[FrugalityCurve]:
    """One curve per algorithm, averaging the per-dataset curves.

    Since every per-dataset curve is affine, the average has intercept mean(P)
    and slope mean(-R/(1+R)).
    """
    matrix.require_complete("frugality curves")
    sub = matrix if datasets is None else matrix.select(datasets=datasets)
    if not sub.datasets:
        raise ValueError("no datasets to average over")
    coef = penalty_coefficient(resource_matrix(sub, kind, ram_gb))
    intercepts = sub.auc.mean(axis=0)
    slopes = -coef.mean(axis=0)
    return [curve_from_line(a, float(p), float(s), w_grid)
            for a, p, s in zip(sub.algorithms, intercepts, slopes)]


def format_curves_csv(curves: Iterable[FrugalityCurve]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["algorithm_id", "w", "score"])
    for c in curves:
        for w, s in c.points:
            writer.writerow([c.algorithm_id, repr(w), repr(float(s))])
    return buf.getvalue()
