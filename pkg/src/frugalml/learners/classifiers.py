"""Four frugal classifiers: ZeroR, Decision Stump, Naive Bayes and HyperPipes.

Each learner exposes ``fit(dataset) -> self`` and ``scores(dataset)``, an
(instances x classes) matrix over the dataset's full class alphabet. Missing
predictor values are skipped per attribute while training; at scoring time a
missing attribute contributes nothing.
"""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .data import NOMINAL, TabularDataset

VARIANCE_FLOOR = 1e-9


class Learner:
    name = "learner"

    def fit(self, train: TabularDataset) -> "Learner":
        raise NotImplementedError

    def scores(self, test: TabularDataset) -> np.ndarray:
        raise NotImplementedError


def _require_instances(train: TabularDataset) -> None:
    if train.n_instances == 0:
        raise ValueError("training set is empty")


def _require_predictor(train: TabularDataset) -> None:
    if not train.attributes:
        raise ValueError("at least one predictor attribute is required")


class ZeroR(Learner):
    """Constant scores: the training class-frequency vector."""

    name = "zeror"

    def fit(self, train):
        _require_instances(train)
        self.freq_ = train.class_counts() / train.n_instances
        return self

    def scores(self, test):
        return np.tile(self.freq_, (test.n_instances, 1))


def _entropy(counts: np.ndarray) -> np.ndarray:
    """Entropy in bits along the last axis of a count array."""
    counts = np.asarray(counts, dtype=float)
    totals = counts.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / totals, 0.0)
        terms = np.where(p > 0, p * np.log2(p), 0.0)
    return -terms.sum(axis=-1)


def numeric_split_gains(x: np.ndarray, y: np.ndarray, n_classes: int) -> tuple[np.ndarray, np.ndarray]:
    """Information gain of every midpoint threshold ``x <= t`` on non-missing values.

    Returns ``(thresholds, gains)`` in ascending threshold order.
    """
    valid = ~np.isnan(x)
    x, y = x[valid], y[valid]
    if x.size == 0:
        return np.empty(0), np.empty(0)
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    onehot = np.zeros((xs.size, n_classes))
    onehot[np.arange(xs.size), ys] = 1.0
    cum = np.cumsum(onehot, axis=0)
    # split after position i when the next value differs
    boundary = np.flatnonzero(xs[1:] > xs[:-1])
    if boundary.size == 0:
        return np.empty(0), np.empty(0)
    total = cum[-1]
    left = cum[boundary]
    right = total - left
    n = xs.size
    nl = left.sum(axis=1)
    gains = _entropy(total) - (nl / n) * _entropy(left) - ((n - nl) / n) * _entropy(right)
    thresholds = (xs[boundary] + xs[boundary + 1]) / 2.0
    return thresholds, gains


def nominal_split_gains(x: np.ndarray, y: np.ndarray, n_values: int, n_classes: int) -> np.ndarray:
    """Gain of each equality test ``x == v`` (NaN where v is unobserved)."""
    valid = ~np.isnan(x)
    codes, y = x[valid].astype(int), y[valid]
    gains = np.full(n_values, np.nan)
    if codes.size == 0:
        return gains
    table = np.zeros((n_values, n_classes))
    np.add.at(table, (codes, y), 1.0)
    total = table.sum(axis=0)
    n = codes.size
    parent = _entropy(total)
    for v in range(n_values):
        nv = table[v].sum()
        if nv == 0 or nv == n:
            continue
        gains[v] = parent - (nv / n) * _entropy(table[v]) - ((n - nv) / n) * _entropy(total - table[v])
    return gains


class DecisionStump(Learner):
    """One-level tree chosen by information gain.

    Numeric attributes split at midpoints between sorted distinct values
    (``x <= t`` goes left); nominal attributes use an equality test. Leaves score
    with their Laplace-smoothed class distribution; an instance missing the split
    attribute gets the smoothed distribution of the whole training set.
    """

    name = "stump"

    def fit(self, train):
        _require_instances(train)
        _require_predictor(train)
        k = train.n_classes
        best_gain, best = -np.inf, None
        for j, attr in enumerate(train.attributes):
            x = train.X[:, j]
            if attr.kind == NOMINAL:
                gains = nominal_split_gains(x, train.y, len(attr.values), k)
                for v, g in enumerate(gains):
                    if not np.isnan(g) and g > best_gain + 1e-12:
                        best_gain, best = g, (j, NOMINAL, float(v))
            else:
                thresholds, gains = numeric_split_gains(x, train.y, k)
                if gains.size:
                    i = int(np.argmax(gains))
                    if gains[i] > best_gain + 1e-12:
                        best_gain, best = float(gains[i]), (j, "numeric", float(thresholds[i]))
        all_counts = train.class_counts().astype(float)
        self.default_ = (all_counts + 1) / (all_counts.sum() + k)
        self.split_ = best
        self.gain_ = best_gain if best else 0.0
        if best is None:
            self.left_ = self.right_ = self.default_
            return self
        j, kind, value = best
        x = train.X[:, j]
        valid = ~np.isnan(x)
        goes_left = (x == value) if kind == NOMINAL else (x <= value)
        left = np.bincount(train.y[valid & goes_left], minlength=k).astype(float)
        right = np.bincount(train.y[valid & ~goes_left], minlength=k).astype(float)
        self.left_ = (left + 1) / (left.sum() + k)
        self.right_ = (right + 1) / (right.sum() + k)
        return self

    def scores(self, test):
        out = np.tile(self.default_, (test.n_instances, 1))
        if self.split_ is None:
            return out
        j, kind, value = self.split_
        x = test.X[:, j]
        valid = ~np.isnan(x)
        goes_left = (x == value) if kind == NOMINAL else (x <= value)
        out[valid & goes_left] = self.left_
        out[valid & ~goes_left] = self.right_
        return out


class NaiveBayes(Learner):
    """Gaussian likelihoods for numeric attributes, Laplace-smoothed frequencies for nominal ones."""

    name = "naive_bayes"

    def fit(self, train):
        _require_instances(train)
        _require_predictor(train)
        k = train.n_classes
        counts = train.class_counts().astype(float)
        self.log_prior_ = np.log((counts + 1) / (counts.sum() + k))
        self.params_ = []
        for j, attr in enumerate(train.attributes):
            x = train.X[:, j]
            valid = ~np.isnan(x)
            if not valid.any():
                self.params_.append(None)
                continue
            if attr.kind == NOMINAL:
                table = np.zeros((k, len(attr.values)))
                np.add.at(table, (train.y[valid], x[valid].astype(int)), 1.0)
                probs = (table + 1) / (table.sum(axis=1, keepdims=True) + len(attr.values))
                self.params_.append(("nominal", np.log(probs)))
                continue
            overall = (x[valid].mean(), max(x[valid].var(), VARIANCE_FLOOR))
            means, variances = np.empty(k), np.empty(k)
            for c in range(k):
                xc = x[valid & (train.y == c)]
                # a class never seen with this attribute falls back to the pooled estimate
                means[c], variances[c] = (xc.mean(), max(xc.var(), VARIANCE_FLOOR)) if xc.size else overall
            self.params_.append(("numeric", means, variances))
        return self

    def log_joint(self, test: TabularDataset) -> np.ndarray:
        out = np.tile(self.log_prior_, (test.n_instances, 1))
        for j, p in enumerate(self.params_):
            if p is None:
                continue
            x = test.X[:, j]
            valid = ~np.isnan(x)
            if not valid.any():
                continue
            xv = x[valid]
            if p[0] == "nominal":
                out[valid] += p[1][:, xv.astype(int)].T
            else:
                _, mu, var = p
                out[valid] += -0.5 * np.log(2 * np.pi * var) - (xv[:, None] - mu) ** 2 / (2 * var)
        return out

    def scores(self, test):
        lj = self.log_joint(test)
        return np.exp(lj - logsumexp(lj, axis=1, keepdims=True))


class HyperPipes(Learner):
    """Per-class bounds ("pipes"): numeric [min, max] and nominal value sets.

    A class scores the fraction of an instance's non-missing attributes that
    fall inside its pipe. :meth:`predict` takes the argmax, ties to the lower
    class index.
    """

    name = "hyperpipes"

    def fit(self, train):
        _require_instances(train)
        _require_predictor(train)
        k, p = train.n_classes, len(train.attributes)
        self.nominal_ = train.nominal_mask()
        self.lo_ = np.full((k, p), np.inf)
        self.hi_ = np.full((k, p), -np.inf)
        self.sets_ = [[set() for _ in range(p)] for _ in range(k)]
        for c in range(k):
            Xc = train.X[train.y == c]
            for j in range(p):
                col = Xc[:, j]
                col = col[~np.isnan(col)]
                if not col.size:
                    continue
                if self.nominal_[j]:
                    self.sets_[c][j] = set(col.astype(int).tolist())
                else:
                    self.lo_[c, j], self.hi_[c, j] = col.min(), col.max()
        return self

    def scores(self, test):
        X = test.X
        present = ~np.isnan(X)
        denom = present.sum(axis=1)
        k = self.lo_.shape[0]
        out = np.zeros((test.n_instances, k))
        for c in range(k):
            inside = (X >= self.lo_[c]) & (X <= self.hi_[c])
            for j in np.flatnonzero(self.nominal_):
                inside[:, j] = np.isin(X[:, j], list(self.sets_[c][j])) if self.sets_[c][j] else False
            inside &= present
            out[:, c] = np.divide(inside.sum(axis=1), denom, out=np.zeros(len(denom)), where=denom > 0)
        return out

    def predict(self, test):
        return np.argmax(self.scores(test), axis=1)


LEARNERS: dict[str, type[Learner]] = {
    "zeror": ZeroR,
    "stump": DecisionStump,
    "naive_bayes": NaiveBayes,
    "hyperpipes": HyperPipes,
}


def make_learner(learner_id: str) -> Learner:
    try:
        return LEARNERS[learner_id]()
    except KeyError:
        raise ValueError(f"unknown learner {learner_id!r}; choose from {', '.join(LEARNERS)}") from None


def _train_predict(cls, train, test):
    return cls().fit(train).scores(test)


def train_predict_zeror(train: TabularDataset, test: TabularDataset) -> np.ndarray:
    return _train_predict(ZeroR, train, test)


def train_predict_stump(train: TabularDataset, test: TabularDataset) -> np.ndarray:
    return _train_predict(DecisionStump, train, test)


def train_predict_naive_bayes(train: TabularDataset, test: TabularDataset) -> np.ndarray:
    return _train_predict(NaiveBayes, train, test)


def train_predict_hyperpipes(train: TabularDataset, test: TabularDataset) -> np.ndarray:
    return _train_predict(HyperPipes, train, test)
