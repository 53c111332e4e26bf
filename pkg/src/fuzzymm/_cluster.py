"""Deterministic k-means used for inducing-point selection and partitioning.

Hand-rolled instead of delegating to a library so the exact policy is
pinned: k-means++ seeding from a caller-supplied 64-bit seed, at most 100
Lloyd iterations, and empty clusters re-seeded to the point farthest from
its nearest centroid.  Same seed and data give bitwise-identical output.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError

MAX_ITER = 100
DEFAULT_SEED = 123456789


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Pairwise squared distances, shape (N, k)."""
    sq = (
        (points * points).sum(axis=1)[:, None]
        + (centers * centers).sum(axis=1)[None, :]
        - 2.0 * (points @ centers.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return sq


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centers[0] = points[first]
    d2 = _sq_dists(points, centers[:1]).ravel()
    for i in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # all remaining mass at zero distance: pick uniformly
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[i] = points[idx]
        d2 = np.minimum(d2, _sq_dists(points, centers[i : i + 1]).ravel())
    return centers


def kmeans(points, k: int, seed: int = DEFAULT_SEED, max_iter: int = MAX_ITER):
    """Cluster ``points`` into ``k`` groups.

    Returns ``(centroids, labels)`` with centroids ordered by creation and
    labels mapping each point to its centroid index.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = points.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    centers = _plus_plus_init(points, k, rng)
    labels = np.zeros(n, dtype=np.intp)
    for _ in range(max_iter):
        d2 = _sq_dists(points, centers)
        labels = d2.argmin(axis=1)
        new_centers = centers.copy()
        nearest = d2.min(axis=1)
        for j in range(k):
            mask = labels == j
            if mask.any():
                new_centers[j] = points[mask].mean(axis=0)
            else:
                # re-seed an empty cluster to the farthest point
                far = int(nearest.argmax())
                new_centers[j] = points[far]
                nearest[far] = 0.0
        if np.array_equal(new_centers, centers):
            break
        centers = new_centers
    labels = _sq_dists(points, centers).argmin(axis=1)
    return centers, labels
