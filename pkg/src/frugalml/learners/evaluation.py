"""Metered evaluation: stratified splits, wall-clock timing and AUC."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..errors import ProtocolError
from ..evaldata import EvalRecord
from .classifiers import make_learner
from .data import TabularDataset
from .metrics import auc_multiclass_ova


@dataclass(frozen=True)
class EvalProtocol:
    """``kind`` is ``"cv"`` (uses ``folds``) or ``"holdout"`` (uses ``test_fraction``)."""

    kind: str = "cv"
    folds: int = 10
    test_fraction: float = 1 / 3

    def __post_init__(self) -> None:
        if self.kind not in ("cv", "holdout"):
            raise ValueError(f"unknown protocol {self.kind!r}")
        if self.kind == "cv" and self.folds < 2:
            raise ValueError("cross-validation needs at least 2 folds")
        if self.kind == "holdout" and not 0 < self.test_fraction < 1:
            raise ValueError("holdout fraction must be in (0, 1)")


def cross_validation(folds: int = 10) -> EvalProtocol:
    return EvalProtocol("cv", folds=folds)


def holdout(test_fraction: float = 1 / 3) -> EvalProtocol:
    return EvalProtocol("holdout", test_fraction=test_fraction)


@dataclass(frozen=True)
class MeteredEval:
    algorithm_id: str
    dataset_id: str
    auc: float
    train_ms: float
    test_ms: float

    def to_record(self) -> EvalRecord:
        return EvalRecord(self.algorithm_id, self.dataset_id, self.auc, self.train_ms, self.test_ms)


def stratified_folds(y: np.ndarray, folds: int, seed: int = 0) -> np.ndarray:
    """Fold index per instance; each class is shuffled and dealt round-robin."""
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(y), dtype=int)
    offset = 0
    for c in np.unique(y):
        idx = np.flatnonzero(y == c)
        rng.shuffle(idx)
        assignment[idx] = (offset + np.arange(idx.size)) % folds
        offset += idx.size
    return assignment


def _splits(dataset: TabularDataset, protocol: EvalProtocol, seed: int):
    counts = dataset.class_counts()
    observed = {c: n for c, n in zip(dataset.classes, counts) if n > 0}
    if protocol.kind == "cv":
        k = protocol.folds
        rare = {c: n for c, n in observed.items() if n < k}
        if rare:
            c, n = min(rare.items(), key=lambda t: t[1])
            raise ProtocolError(
                f"class {c!r} has only {n} instance(s), so some of the {k} folds would miss it; "
                f"use at most {n} folds"
            )
        fold = stratified_folds(dataset.y, k, seed)
        return [(np.flatnonzero(fold != f), np.flatnonzero(fold == f)) for f in range(k)]
    rare = {c: n for c, n in observed.items() if n < 2}
    if rare:
        raise ProtocolError(f"class {next(iter(rare))!r} has a single instance; holdout needs 2 per class")
    rng = np.random.default_rng(seed)
    test_idx = []
    for c in np.unique(dataset.y):
        idx = np.flatnonzero(dataset.y == c)
        rng.shuffle(idx)
        n_test = min(max(int(round(protocol.test_fraction * idx.size)), 1), idx.size - 1)
        test_idx.append(idx[:n_test])
    test = np.sort(np.concatenate(test_idx))
    train = np.setdiff1d(np.arange(dataset.n_instances), test)
    return [(train, test)]


def metered_evaluate(learner_id: str, dataset: TabularDataset, protocol: EvalProtocol = EvalProtocol(),
                     seed: int = 0, weighted_auc: bool = False) -> MeteredEval:
    """Train and score ``learner_id`` under ``protocol``, timing both phases.

    ``train_ms`` and ``test_ms`` are summed over splits (monotonic clock). The
    AUC is the one-vs-all multiclass AUC of each held-out split, averaged over
    splits; every stratified test split contains every class.
    """
    splits = _splits(dataset, protocol, seed)
    train_ns = test_ns = 0
    aucs = []
    for train_idx, test_idx in splits:
        train, test = dataset.subset(train_idx), dataset.subset(test_idx)
        learner = make_learner(learner_id)
        t0 = time.perf_counter_ns()
        learner.fit(train)
        t1 = time.perf_counter_ns()
        scores = learner.scores(test)
        t2 = time.perf_counter_ns()
        train_ns += t1 - t0
        test_ns += t2 - t1
        aucs.append(auc_multiclass_ova(scores, test.y, weighted=weighted_auc))
    return MeteredEval(learner_id, dataset.name, float(np.mean(aucs)), train_ns / 1e6, test_ns / 1e6)
