"""Lloyd k-means with D-squared (k-means++) seeding.

Deterministic given the seed: distance ties assign to the lowest center
index, the new-center reduction sums in fixed point order, and an emptied
cluster is reseeded at the point farthest from its assigned center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass
class KmeansResult:
    centers: np.ndarray  # (k, d)
    assignments: np.ndarray  # (n,) index of the nearest center per point
    inertia: float  # sum of squared distances to assigned centers
    iterations: int
    inertia_history: list[float]  # one entry per assignment pass, non-increasing


def _as_points(points: np.ndarray) -> np.ndarray:
    array = np.asarray(points, dtype=np.float64)
    if array.ndim != 2 or array.shape[0] == 0:
        raise ValueError(f"points must be a non-empty 2-D array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError("points contain non-finite values")
    return array


def _check_k(points: np.ndarray, k: int) -> None:
    distinct = np.unique(points, axis=0).shape[0]
    if not 1 <= k <= distinct:
        raise ValueError(f"k={k} must be in [1, number of distinct points={distinct}]")


def kmeans_pp_init(points: np.ndarray, k: int, seed: int | np.random.Generator) -> np.ndarray:
    """Pick k initial centers by D-squared sampling.

    The first center is uniform over the points; each subsequent center is
    drawn with probability proportional to the squared distance to the
    nearest center chosen so far.

    Parameters
    ----------
    points : (n, d) array
    k : int, 1 <= k <= number of distinct points
    seed : int seed or a Generator (consumed in place)

    Returns
    -------
    (k, d) array of chosen centers (copies of input points).
    """
    points = _as_points(points)
    _check_k(points, k)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]), dtype=np.float64)
    centers[0] = points[int(rng.integers(n))]
    min_sq = cdist(points, centers[:1], "sqeuclidean")[:, 0]
    for i in range(1, k):
        total = min_sq.sum()
        if total <= 0.0:  # unreachable while k <= distinct points; guard anyway
            raise ValueError("no remaining distinct points to seed from")
        centers[i] = points[int(rng.choice(n, p=min_sq / total))]
        min_sq = np.minimum(min_sq, cdist(points, centers[i : i + 1], "sqeuclidean")[:, 0])
    return centers


def kmeans(
    points: np.ndarray,
    k: int,
    seed: int | np.random.Generator,
    max_iter: int = 100,
    tol: float = 1e-6,
) -> KmeansResult:
    """Cluster points into k groups (k-means++ init, then Lloyd iterations).

    Iterates until the largest center movement is below ``tol`` or ``max_iter``
    is reached. An emptied cluster is repaired by moving its center to the
    point farthest from its currently assigned center.
    """
    points = _as_points(points)
    _check_k(points, k)
    centers = kmeans_pp_init(points, k, seed)
    n = points.shape[0]
    history: list[float] = []
    iterations = 0

    def assign(current: np.ndarray) -> tuple[np.ndarray, float]:
        sq = cdist(points, current, "sqeuclidean")
        labels = np.argmin(sq, axis=1)  # argmin takes the lowest index on ties
        return labels, float(sq[np.arange(n), labels].sum())

    for _ in range(max_iter):
        iterations += 1
        labels, inertia = assign(centers)
        if history and inertia > history[-1] + 1e-9 * max(1.0, history[-1]):
            raise AssertionError(f"inertia increased: {history[-1]} -> {inertia}")
        history.append(inertia)

        new_centers = centers.copy()
        empty: list[int] = []
        for j in range(k):
            member_mask = labels == j
            if member_mask.any():
                new_centers[j] = points[member_mask].mean(axis=0)
            else:
                empty.append(j)
        if empty:
            point_sq = cdist(points, centers, "sqeuclidean")[np.arange(n), labels]
            order = np.argsort(-point_sq, kind="stable")
            for slot, j in enumerate(empty):
                new_centers[j] = points[order[slot]]

        movement = float(np.max(np.linalg.norm(new_centers - centers, axis=1)))
        centers = new_centers
        if movement < tol:
            break

    labels, inertia = assign(centers)
    if history and inertia > history[-1] + 1e-9 * max(1.0, history[-1]):
        raise AssertionError(f"inertia increased: {history[-1]} -> {inertia}")
    history.append(inertia)
    return KmeansResult(
        centers=centers,
        assignments=labels,
        inertia=inertia,
        iterations=iterations,
        inertia_history=history,
    )
