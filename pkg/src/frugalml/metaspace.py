"""Structure detection and clustering over datasets.

Points are datasets described by a feature vector (their row of a performance
matrix, or their coordinates in an SVD latent space). All randomized routines
take an integer seed and are bit-reproducible for it.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.cluster import hierarchy
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist


@dataclass(frozen=True, eq=False)
class PointSet:
    ids: tuple[str, ...]
    coordinates: np.ndarray
    standardized: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "ids", tuple(self.ids))
        coords = np.array(self.coordinates, dtype=float)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2 or coords.shape[0] != len(self.ids):
            raise ValueError("coordinates must have one row per id")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate ids in point set")
        if not np.all(np.isfinite(coords)):
            raise ValueError("non-finite coordinate in point set")
        coords.flags.writeable = False
        object.__setattr__(self, "coordinates", coords)

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return self.coordinates.shape[1]

    def subset(self, ids: Sequence[str]) -> "PointSet":
        index = {x: i for i, x in enumerate(self.ids)}
        rows = [index[x] for x in ids]
        return PointSet(tuple(ids), self.coordinates[rows], self.standardized)

    @classmethod
    def from_array(cls, coords, ids: Sequence[str] | None = None) -> "PointSet":
        coords = np.asarray(coords, dtype=float)
        if ids is None:
            ids = [f"p{i}" for i in range(coords.shape[0])]
        return cls(tuple(ids), coords)


def standardize(points: PointSet) -> PointSet:
    """Z-score each column (population std); constant columns are dropped."""
    X = points.coordinates
    if len(points) == 0:
        return PointSet(points.ids, X, True)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    scale = np.maximum(np.abs(mean), 1.0)
    keep = std > 1e-12 * scale
    Z = (X[:, keep] - mean[keep]) / std[keep]
    return PointSet(points.ids, Z, True)


@dataclass(frozen=True, eq=False)
class ClusterAssignment:
    """Flat clustering. ``labels[i]`` is the cluster of ``ids[i]``, in ``[0, k)``.

    ``centers`` holds k coordinate rows (centroids for kMeans, medoid rows for
    PAM); ``medoids`` holds medoid ids for PAM and is None otherwise. ``cost``
    is the within-cluster sum of squares (kMeans) or summed distance to the
    medoid (PAM).
    """

    ids: tuple[str, ...]
    k: int
    labels: np.ndarray
    centers: np.ndarray
    medoids: tuple[str, ...] | None = None
    cost: float = 0.0

    def __post_init__(self) -> None:
        labels = np.array(self.labels, dtype=int)
        if labels.shape != (len(self.ids),):
            raise ValueError("one label per id required")
        if self.k < 1 or np.any(labels < 0) or np.any(labels >= self.k):
            raise ValueError("labels must lie in [0, k)")
        if len(np.unique(labels)) != self.k:
            raise ValueError("every cluster must have at least one member")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "ids", tuple(self.ids))

    def mapping(self) -> dict[str, int]:
        return dict(zip(self.ids, (int(x) for x in self.labels)))

    def members(self, cluster: int) -> list[str]:
        return [i for i, c in zip(self.ids, self.labels) if c == cluster]

    def sizes(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.k).tolist()

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "cluster"])
        for i, c in zip(self.ids, self.labels):
            writer.writerow([i, int(c)])
        return buf.getvalue()


# --------------------------------------------------------------------------- Hopkins


def default_hopkins_m(n: int) -> int:
    return max(1, min(50, n // 10))


def hopkins(points: PointSet, m: int | None = None, seed: int = 0) -> float:
    """Hopkins clustering-tendency statistic, oriented so clustered data scores near 0.

    With ``w`` the summed nearest-neighbour distance from ``m`` sampled data
    points to the rest of the data, and ``u`` the same sum from ``m`` uniform
    points in the bounding box, returns ``w / (u + w)``; about 0.5 for
    uniformly scattered data.
    """
    X = points.coordinates
    n = len(points)
    if n < 4:
        raise ValueError("Hopkins statistic needs at least 4 points")
    if m is None:
        m = default_hopkins_m(n)
    if m < 1 or m > n / 2:
        raise ValueError(f"sample size m={m} must be in [1, n/2] for n={n}")
    lo, hi = X.min(axis=0), X.max(axis=0)
    if X.shape[1] == 0 or np.any(hi - lo <= 0):
        raise ValueError("bounding box of the points has zero volume")
    rng = np.random.default_rng(seed)
    sample = rng.choice(n, size=m, replace=False)
    uniform = rng.uniform(lo, hi, size=(m, X.shape[1]))
    tree = cKDTree(X)
    # k=2: the nearest hit of a data point is itself
    w = tree.query(X[sample], k=2)[0][:, 1].sum()
    u = tree.query(uniform, k=1)[0].sum()
    return float(w / (u + w))


# --------------------------------------------------------------------------- silhouette


def silhouette(points: PointSet, assignment: ClusterAssignment) -> tuple[float, np.ndarray]:
    """Mean and per-point silhouette with Euclidean dissimilarity; singletons score 0."""
    if assignment.k < 2:
        raise ValueError("silhouette needs at least 2 clusters")
    labels = assignment.labels
    D = cdist(points.coordinates, points.coordinates)
    n = len(points)
    sizes = np.bincount(labels, minlength=assignment.k)
    # sums[i, c] = total distance from i to members of c
    onehot = np.zeros((n, assignment.k))
    onehot[np.arange(n), labels] = 1.0
    sums = D @ onehot
    s = np.zeros(n)
    for i in range(n):
        own = labels[i]
        if sizes[own] == 1:
            continue
        a = sums[i, own] / (sizes[own] - 1)
        others = [sums[i, c] / sizes[c] for c in range(assignment.k) if c != own]
        b = min(others)
        denom = max(a, b)
        s[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(s.mean()), s


# --------------------------------------------------------------------------- kMeans


def _relabel_by_first_appearance(labels: np.ndarray, k: int) -> np.ndarray:
    perm = np.full(k, -1)
    nxt = 0
    for c in labels:
        if perm[c] < 0:
            perm[c] = nxt
            nxt += 1
    return perm


def _kmeanspp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            # every point coincides with a chosen center
            free = np.setdiff1d(np.arange(n), chosen)
            idx = int(rng.choice(free))
        chosen.append(idx)
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(axis=1))
    return X[chosen].copy()


def _lloyd(X: np.ndarray, centers: np.ndarray, max_iter: int) -> tuple[np.ndarray, np.ndarray, list[float]]:
    k = centers.shape[0]
    d2 = cdist(X, centers, "sqeuclidean")
    labels = d2.argmin(axis=1)
    history: list[float] = []
    for _ in range(max_iter):
        labels = _fill_empty(X, labels, k, d2)
        centers = np.stack([X[labels == c].mean(axis=0) for c in range(k)])
        d2 = cdist(X, centers, "sqeuclidean")
        history.append(float(d2[np.arange(len(X)), labels].sum()))
        new = d2.argmin(axis=1)
        if np.array_equal(new, labels):
            break
        labels = new
    labels = _fill_empty(X, labels, k, d2)
    return labels, centers, history


def _fill_empty(X: np.ndarray, labels: np.ndarray, k: int, d2: np.ndarray) -> np.ndarray:
    counts = np.bincount(labels, minlength=k)
    if counts.min() > 0:
        return labels
    labels = labels.copy()
    own = d2[np.arange(len(X)), labels]
    for c in np.flatnonzero(counts == 0):
        # steal the worst-fitting point from a cluster that can spare it
        candidates = np.flatnonzero(counts[labels] > 1)
        i = candidates[np.argmax(own[candidates])]
        counts[labels[i]] -= 1
        labels[i] = c
        counts[c] = 1
        own[i] = 0.0
    return labels


def kmeans(points: PointSet, k: int, seed: int = 0, n_init: int = 10, max_iter: int = 300) -> ClusterAssignment:
    """Lloyd's algorithm from k-means++ seeding, best of ``n_init`` restarts by WCSS.

    Restart ``r`` draws from its own generator spawned from ``seed``, so the
    result does not depend on the order restarts are run in.
    """
    X = points.coordinates
    n = len(points)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be between 1 and the number of points ({n})")
    best = None
    for child in np.random.SeedSequence(seed).spawn(n_init):
        rng = np.random.default_rng(child)
        labels, centers, history = _lloyd(X, _kmeanspp(X, k, rng), max_iter)
        wcss = float(((X - centers[labels]) ** 2).sum())
        if best is None or wcss < best[0]:
            best = (wcss, labels, centers)
    wcss, labels, centers = best
    perm = _relabel_by_first_appearance(labels, k)
    new_centers = np.empty_like(centers)
    new_centers[perm] = centers
    return ClusterAssignment(points.ids, k, perm[labels], new_centers, cost=wcss)


def choose_k_silhouette(points: PointSet, k_min: int = 2, k_max: int | None = None,
                        seed: int = 0) -> tuple[int, dict[int, float]]:
    """Run kMeans for each k in ``[k_min, k_max]`` and pick the highest mean silhouette.

    Ties go to the smaller k.
    """
    n = len(points)
    if k_max is None:
        k_max = min(10, n - 1)
    if k_min < 2:
        raise ValueError("k_min must be >= 2")
    if k_max < k_min:
        raise ValueError("k_max must be >= k_min")
    if k_max >= n:
        raise ValueError(f"k_max={k_max} must be smaller than the number of points ({n})")
    scores = {}
    for k in range(k_min, k_max + 1):
        scores[k] = silhouette(points, kmeans(points, k, seed))[0]
    best = max(scores, key=lambda k: (scores[k], -k))
    return best, scores


# --------------------------------------------------------------------------- PAM


def _first_within(values: np.ndarray, best: float) -> int:
    """Lowest index whose value is within rounding noise of ``best`` (the minimum)."""
    return int(np.flatnonzero(values <= best + 1e-12 * max(1.0, abs(best)))[0])


def _pam(D: np.ndarray, k: int) -> list[int]:
    n = D.shape[0]
    sums = D.sum(axis=1)
    medoids = [_first_within(sums, sums.min())]
    nearest = D[:, medoids[0]].copy()
    while len(medoids) < k:
        gains = np.maximum(nearest[:, None] - D, 0.0).sum(axis=0)
        gains[medoids] = -np.inf
        c = _first_within(-gains, -gains.max())
        medoids.append(c)
        nearest = np.minimum(nearest, D[:, c])

    cost = D[:, medoids].min(axis=1).sum()
    while True:
        best = (cost, -1, -1)
        non_medoids = np.setdiff1d(np.arange(n), medoids)
        if non_medoids.size == 0:
            return sorted(medoids)
        for pos in range(k):
            rest = medoids[:pos] + medoids[pos + 1:]
            d_rest = D[:, rest].min(axis=1) if rest else np.full(n, np.inf)
            swap_costs = np.minimum(d_rest[:, None], D[:, non_medoids]).sum(axis=0)
            h = int(np.argmin(swap_costs))
            if swap_costs[h] < best[0] - 1e-12 * max(1.0, abs(cost)):
                best = (float(swap_costs[h]), pos, int(non_medoids[h]))
        if best[1] < 0:
            return sorted(medoids)
        medoids[best[1]] = best[2]
        cost = best[0]


def pam_medoids(points: PointSet, k: int, seed: int = 0) -> ClusterAssignment:
    """Partitioning Around Medoids (BUILD then SWAP) on Euclidean distances.

    Both phases are deterministic (ties go to the lower index); ``seed`` is
    accepted for interface symmetry with :func:`kmeans`.
    """
    n = len(points)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be between 1 and the number of points ({n})")
    X = points.coordinates
    D = cdist(X, X)
    medoids = _pam(D, k)
    labels = D[:, medoids].argmin(axis=1)
    labels[medoids] = np.arange(k)
    cost = float(D[np.arange(n), np.asarray(medoids)[labels]].sum())
    return ClusterAssignment(points.ids, k, labels, X[medoids].copy(),
                             medoids=tuple(points.ids[m] for m in medoids), cost=cost)


def allocate_quotas(sizes: Sequence[int], n_total: int) -> list[int]:
    """Split ``n_total`` picks across clusters proportionally to size.

    Largest-remainder rounding, at least one pick per cluster, never more than
    a cluster's size.
    """
    k = len(sizes)
    total = sum(sizes)
    if n_total < k:
        raise ValueError(f"n_total={n_total} is smaller than the number of clusters ({k})")
    if n_total > total:
        raise ValueError(f"n_total={n_total} exceeds the number of points ({total})")
    raw = [n_total * s / total for s in sizes]
    quotas = [math.floor(r) for r in raw]
    by_remainder = sorted(range(k), key=lambda c: (-(raw[c] - quotas[c]), c))
    for c in by_remainder[: n_total - sum(quotas)]:
        quotas[c] += 1
    for c in range(k):
        if quotas[c] == 0:
            donor = max((d for d in range(k) if quotas[d] > 1), key=lambda d: (quotas[d] - raw[d], quotas[d], -d))
            quotas[donor] -= 1
            quotas[c] = 1
    # move any excess over cluster size to clusters with room
    excess = sum(max(0, q - s) for q, s in zip(quotas, sizes))
    quotas = [min(q, s) for q, s in zip(quotas, sizes)]
    while excess:
        room = [c for c in range(k) if quotas[c] < sizes[c]]
        c = max(room, key=lambda c: (raw[c] - quotas[c], -c))
        quotas[c] += 1
        excess -= 1
    return quotas


def select_representatives(points: PointSet, assignment: ClusterAssignment, n_total: int,
                           seed: int = 0) -> list[str]:
    """Pick ``n_total`` medoid ids, allotted to clusters in proportion to their size."""
    quotas = allocate_quotas(assignment.sizes(), n_total)
    chosen: list[str] = []
    for c, q in enumerate(quotas):
        members = points.subset(assignment.members(c))
        chosen.extend(pam_medoids(members, q, seed).medoids)
    return chosen


# --------------------------------------------------------------------------- projections


@dataclass(frozen=True, eq=False)
class LatentSpace:
    """Top-k SVD coordinates (left singular vectors scaled by singular values)."""

    U: np.ndarray
    singular_values: np.ndarray
    explained_variance: float
    spectrum: np.ndarray = field(repr=False, default=None)

    def to_csv(self, ids: Sequence[str]) -> str:
        buf = io.StringIO()
        sv = " ".join(f"{s:.10g}" for s in self.singular_values)
        buf.write(f"# singular_values: {sv}\n")
        buf.write(f"# explained_variance: {self.explained_variance:.10g}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id"] + [f"latent{i + 1}" for i in range(self.U.shape[1])])
        for i, row in zip(ids, self.U):
            writer.writerow([i] + [repr(float(x)) for x in row])
        return buf.getvalue()


def _orient(vt: np.ndarray) -> np.ndarray:
    """Signs making each row's largest-magnitude entry positive."""
    idx = np.argmax(np.abs(vt), axis=1)
    signs = np.sign(vt[np.arange(vt.shape[0]), idx])
    signs[signs == 0] = 1.0
    return signs


def svd_latent(matrix, k: int) -> LatentSpace:
    X = np.asarray(matrix, dtype=float)
    if X.ndim != 2 or not np.all(np.isfinite(X)):
        raise ValueError("matrix must be a complete 2-D array")
    if not 1 <= k <= min(X.shape):
        raise ValueError(f"k={k} must be between 1 and min(matrix dims) = {min(X.shape)}")
    u, s, vt = np.linalg.svd(X, full_matrices=False)
    signs = _orient(vt)
    u = u * signs
    energy = float((s ** 2).sum())
    explained = 1.0 if energy == 0 else float((s[:k] ** 2).sum() / energy)
    return LatentSpace(u[:, :k] * s[:k], s[:k].copy(), explained, s.copy())


def pca_project(points: PointSet, dims: int) -> np.ndarray:
    """Project centered points onto their top ``dims`` principal axes.

    Callers wanting unit-variance features pass a :func:`standardize`-d set.
    Each axis is oriented so its largest-magnitude loading is positive.
    """
    X = points.coordinates
    if not 1 <= dims <= X.shape[1]:
        raise ValueError(f"dims={dims} must be between 1 and the dimensionality ({X.shape[1]})")
    Xc = X - X.mean(axis=0)
    _, _, vt = np.linalg.svd(Xc, full_matrices=False)
    axes = vt[:dims] * _orient(vt[:dims])[:, None]
    return Xc @ axes.T


# --------------------------------------------------------------------------- hierarchical


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """Agglomerative merge tree.

    Leaves are nodes ``0..n-1``; merge ``i`` creates node ``n + i``. Each merge is
    ``(node_a, node_b, height, size)``.
    """

    ids: tuple[str, ...]
    merges: tuple[tuple[int, int, float, int], ...]
    leaf_order: tuple[str, ...]

    def linkage_matrix(self) -> np.ndarray:
        return np.array([[a, b, h, s] for a, b, h, s in self.merges], dtype=float)

    def cut(self, n_clusters: int) -> np.ndarray:
        """Flat labels in ``[0, n_clusters)`` from undoing the top merges."""
        n = len(self.ids)
        if not 1 <= n_clusters <= n:
            raise ValueError("n_clusters out of range")
        raw = hierarchy.cut_tree(self.linkage_matrix(), n_clusters=n_clusters).ravel()
        return _relabel_by_first_appearance(raw, n_clusters)[raw]

    def to_dict(self) -> dict:
        return {
            "ids": list(self.ids),
            "merges": [{"a": a, "b": b, "height": h, "size": s} for a, b, h, s in self.merges],
            "leaf_order": list(self.leaf_order),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def hierarchical_cluster(points: PointSet) -> Dendrogram:
    """Ward-linkage clustering; leaves ordered depth-first, smaller child first."""
    n = len(points)
    if n < 2:
        raise ValueError("hierarchical clustering needs at least 2 points")
    Z = hierarchy.linkage(points.coordinates, method="ward")
    merges = tuple((int(a), int(b), float(h), int(s)) for a, b, h, s in Z)

    size = [1] * n + [m[3] for m in merges]
    first_leaf = list(range(n)) + [0] * len(merges)
    for i, (a, b, _, _) in enumerate(merges):
        first_leaf[n + i] = min(first_leaf[a], first_leaf[b])

    order: list[int] = []
    stack = [n + len(merges) - 1]
    while stack:
        node = stack.pop()
        if node < n:
            order.append(node)
            continue
        a, b = merges[node - n][:2]
        first, second = sorted((a, b), key=lambda c: (size[c], first_leaf[c]))
        stack.append(second)
        stack.append(first)
    return Dendrogram(points.ids, merges, tuple(points.ids[i] for i in order))


# --------------------------------------------------------------------------- summaries


def summarize_clusters(features: Mapping[str, Mapping[str, float]],
                       assignment: ClusterAssignment) -> list[dict]:
    """Mean and median of each feature per cluster.

    ``features`` maps ids to ``{feature_name: value}``; ids without features are
    skipped. Returns rows ``{feature, cluster, count, mean, median}``.
    """
    names: list[str] = []
    for values in features.values():
        for name in values:
            if name not in names:
                names.append(name)
    rows = []
    for name in names:
        for c in range(assignment.k):
            vals = [float(features[i][name]) for i in assignment.members(c) if i in features and name in features[i]]
            rows.append({
                "feature": name,
                "cluster": c,
                "count": len(vals),
                "mean": float(np.mean(vals)) if vals else math.nan,
                "median": float(np.median(vals)) if vals else math.nan,
            })
    return rows
