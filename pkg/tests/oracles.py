"""Slow, obviously-correct reference implementations used to check the fast paths."""

import itertools
import math

import numpy as np


def scan_crossing(P_a, R_a, P_b, R_b, w_end=1.0, step=1e-6):
    """First sign change of score_a - score_b on a dense w grid, or None."""
    w = np.arange(0.0, w_end + step / 2, step)
    diff = (P_a - w / (1 + 1 / R_a)) - (P_b - w / (1 + 1 / R_b))
    sign = np.sign(diff)
    flips = np.nonzero(sign[:-1] * sign[1:] <= 0)[0]
    if diff[0] == 0 and np.all(diff == 0):
        return None
    if flips.size == 0:
        return None
    i = flips[0]
    # linear interpolation inside the bracketing step
    d0, d1 = diff[i], diff[i + 1]
    return float(w[i] if d0 == d1 else w[i] + step * d0 / (d0 - d1))


def dominates(p, q):
    """p, q are (auc, time)."""
    return p[0] >= q[0] and p[1] <= q[1] and (p[0] > q[0] or p[1] < q[1])


def brute_front(items):
    """items: list of (id, auc, time). Returns the set of non-dominated ids, duplicates kept by smallest id."""
    out = set()
    for i, (a, pa, ta) in enumerate(items):
        if any(dominates((pb, tb), (pa, ta)) for j, (b, pb, tb) in enumerate(items) if j != i):
            continue
        if any(pb == pa and tb == ta and b < a for b, pb, tb in items):
            continue
        out.add(a)
    return out


def pair_count_auc(scores, labels):
    """P(score_pos > score_neg) + 0.5 P(tie) over all positive/negative pairs."""
    pos = [s for s, y in zip(scores, labels) if y]
    neg = [s for s, y in zip(scores, labels) if not y]
    total = 0.0
    for p in pos:
        for n in neg:
            total += 1.0 if p > n else 0.5 if p == n else 0.0
    return total / (len(pos) * len(neg))


def exhaustive_medoids(X, k):
    """Subset of k row indices minimizing the summed distance to the nearest medoid."""
    D = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(-1))
    best, best_cost = None, math.inf
    for combo in itertools.combinations(range(len(X)), k):
        cost = D[:, combo].min(axis=1).sum()
        if cost < best_cost - 1e-12:
            best, best_cost = combo, cost
    return sorted(best), best_cost


def entropy(counts):
    n = sum(counts)
    return -sum(c / n * math.log2(c / n) for c in counts if c)


def best_threshold_gain(x, y):
    """Exhaustive search over midpoints between distinct sorted values; x <= t goes left."""
    values = sorted(set(x))
    classes = sorted(set(y))
    base = entropy([list(y).count(c) for c in classes])
    best = (-1.0, None)
    for lo, hi in zip(values, values[1:]):
        t = (lo + hi) / 2
        left = [c for v, c in zip(x, y) if v <= t]
        right = [c for v, c in zip(x, y) if v > t]
        rem = sum(len(s) / len(y) * entropy([s.count(c) for c in classes]) for s in (left, right))
        if base - rem > best[0] + 1e-12:
            best = (base - rem, t)
    return best


def all_pairs_front(auc, time):
    """Boolean mask of non-dominated points by an explicit n x n dominance table."""
    auc, time = np.asarray(auc), np.asarray(time)
    ge = auc[:, None] >= auc[None, :]
    le = time[:, None] <= time[None, :]
    strict = (auc[:, None] > auc[None, :]) | (time[:, None] < time[None, :])
    dom = ge & le & strict  # dom[i, j]: i dominates j
    return ~dom.any(axis=0)
