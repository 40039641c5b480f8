"""ROC AUC via the Mann-Whitney statistic with midranks for ties."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from ..errors import MetricError


def auc_binary(scores, labels) -> float:
    """Probability that a random positive outscores a random negative (ties count 1/2)."""
    scores = np.asarray(scores, dtype=float).ravel()
    labels = np.asarray(labels).ravel()
    if scores.shape != labels.shape:
        raise MetricError("scores and labels differ in length")
    if not np.all(np.isfinite(scores)):
        raise MetricError("scores must be finite")
    if labels.dtype != bool:
        if not np.all(np.isin(labels, (0, 1))):
            raise MetricError("labels must be binary (0/1 or bool)")
        labels = labels == 1
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricError("AUC needs both positive and negative labels")
    ranks = rankdata(scores, method="average")
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def auc_multiclass_ova(scores, labels, weighted: bool = False) -> float:
    """Mean one-vs-all AUC over the classes present in ``labels``.

    ``scores[:, c]`` scores class ``c``; ``labels`` holds integer class codes.
    With ``weighted`` the per-class AUCs are weighted by class prevalence.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=int).ravel()
    if scores.ndim != 2 or scores.shape[0] != labels.size:
        raise MetricError("scores must be an (instances x classes) matrix")
    present, counts = np.unique(labels, return_counts=True)
    if present.size < 2:
        raise MetricError("multiclass AUC needs at least 2 classes present")
    if present.max() >= scores.shape[1] or present.min() < 0:
        raise MetricError("label outside the score matrix columns")
    aucs = np.array([auc_binary(scores[:, c], labels == c) for c in present])
    if weighted:
        return float(np.dot(aucs, counts) / counts.sum())
    return float(aucs.mean())
