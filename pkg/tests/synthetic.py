"""Seeded synthetic fixtures shared by the unit and acceptance tests."""

import numpy as np

from frugalml.metaspace import PointSet


def blobs(centers, per_blob, sigma, seed=0):
    """Gaussian blobs; returns (PointSet, ground-truth labels)."""
    rng = np.random.default_rng(seed)
    centers = np.asarray(centers, float)
    X = np.concatenate([c + sigma * rng.standard_normal((per_blob, centers.shape[1])) for c in centers])
    truth = np.repeat(np.arange(len(centers)), per_blob)
    return PointSet.from_array(X), truth


def uniform(n, d=2, seed=0):
    return PointSet.from_array(np.random.default_rng(seed).random((n, d)))


THREE_CENTERS = [(0.2, 0.2), (0.8, 0.3), (0.5, 0.8)]
TWO_CENTERS = [(0.25, 0.5), (0.75, 0.5)]


def dataset_csv(path, n, n_classes, seed, separation=3.0):
    """Numeric + nominal tabular dataset whose class depends on the first feature."""
    rng = np.random.default_rng(seed)
    y = np.arange(n) % n_classes
    x1 = y * separation + rng.standard_normal(n)
    x2 = rng.standard_normal(n)
    colour = np.where(rng.random(n) < 0.5, "red", "blue")
    with open(path, "w") as fh:
        fh.write("x1,x2,colour,class\n")
        for a, b, c, label in zip(x1, x2, colour, y):
            fh.write(f"{a:.6f},{b:.6f},{c},c{label}\n")
    return path
