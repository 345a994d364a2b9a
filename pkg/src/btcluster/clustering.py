"""Lloyd-style K-means with seeded initialization.

Assignment uses squared Euclidean distance with ties going to the lowest
centroid index. A cluster left empty by the
nearest-centroid pass is reseated on the row farthest from its own
centroid, so the output always has ``k`` populated clusters. Iteration
stops when an assignment step (nearest centroid plus repair) moves no row
(``converged``) or after ``max_iterations`` steps.

Every step is computed in a fixed order, so a given ``(rows, config)`` pair
always produces a bit-identical model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

INIT_METHODS = ("kmeanspp", "random_points")


@dataclass(frozen=True)
class KMeansConfig:
    k: int = 10
    seed: int = 0
    init: str = "kmeanspp"
    max_iterations: int = 100

    def __post_init__(self):
        if int(self.k) < 1:
            raise InputError(f"k must be a positive integer, got {self.k}")
        if int(self.seed) < 0:
            raise InputError(f"seed must be non-negative, got {self.seed}")
        if self.init not in INIT_METHODS:
            raise InputError(f"init must be one of {INIT_METHODS}, got {self.init!r}")
        if int(self.max_iterations) < 1:
            raise InputError(f"max_iterations must be positive, got {self.max_iterations}")


@dataclass(eq=False)
class KMeansModel:
    centroids: np.ndarray
    assignments: np.ndarray
    iterations_run: int
    converged: bool
    # within-cluster SSE after the initial assignment and after every update
    sse_history: list = field(default_factory=list)

    @property
    def k(self):
        return self.centroids.shape[0]

    @property
    def sse(self):
        return self.sse_history[-1]


def as_matrix(rows) -> np.ndarray:
    """Stack feature vectors (or plain sequences) into a float64 matrix.

    Raises :class:`InputError` naming the first offending row on ragged or
    non-finite input.
    """
    rows = list(rows)
    if not rows:
        raise InputError("no rows to cluster")
    vecs = [r.values if hasattr(r, "values") else r for r in rows]
    dim = len(vecs[0])
    for i, v in enumerate(vecs):
        if len(v) != dim:
            raise InputError(f"row {_row_name(rows, i)} has dimension {len(v)}, expected {dim}")
    X = np.asarray(vecs, dtype=np.float64).reshape(len(vecs), dim)
    bad = np.flatnonzero(~np.all(np.isfinite(X), axis=1))
    if bad.size:
        raise InputError(f"row {_row_name(rows, int(bad[0]))} contains a non-finite value")
    return X


def _row_name(rows, i):
    image_id = getattr(rows[i], "image_id", None)
    return f"{i} ({image_id})" if image_id else str(i)


def squared_distances(X, centroids):
    diff = X[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def nearest_centroid(point, centroids) -> int:
    """Index of the closest centroid; exact ties go to the lowest index."""
    p = np.asarray(point, dtype=np.float64).reshape(-1)
    C = np.asarray(centroids, dtype=np.float64)
    if C.ndim != 2 or C.shape[0] == 0:
        raise InputError("need at least one centroid")
    if C.shape[1] != p.size:
        raise InputError(f"point has dimension {p.size}, centroids have {C.shape[1]}")
    d = squared_distances(p[None, :], C)[0]
    return int(np.argmin(d))


def within_sse(X, centroids, assignments) -> float:
    diff = X - centroids[assignments]
    return float(np.einsum("ij,ij->", diff, diff))


def init_centroids(rows, config: KMeansConfig) -> np.ndarray:
    X = rows if isinstance(rows, np.ndarray) else as_matrix(rows)
    return X[init_indices(X, config)].copy()


def init_indices(X: np.ndarray, config: KMeansConfig) -> np.ndarray:
    """Row indices of the initial centroids, driven by ``config.seed``."""
    n, k = X.shape[0], config.k
    if k > n:
        raise InputError(f"k={k} exceeds the number of rows ({n})")
    rng = np.random.default_rng(config.seed)
    if config.init == "random_points":
        _, first = np.unique(X, axis=0, return_index=True)
        distinct = np.sort(first)
        if distinct.size < k:
            raise InputError(f"random_points init needs {k} distinct rows, found {distinct.size}")
        return rng.choice(distinct, size=k, replace=False)

    chosen = [int(rng.integers(n))]
    closest = squared_distances(X, X[chosen])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            # every row coincides with a chosen centroid
            remaining = np.setdiff1d(np.arange(n), chosen)
            idx = int(rng.choice(remaining))
        chosen.append(idx)
        closest = np.minimum(closest, squared_distances(X, X[idx : idx + 1])[:, 0])
    return np.asarray(chosen)


def assign(X, centroids):
    return np.argmin(squared_distances(X, centroids), axis=1)


def update_centroids(X, assignments, k):
    """Mean of each cluster's members, summed in row order."""
    dim = X.shape[1]
    sums = np.zeros((k, dim))
    # unbuffered, applied in index order
    np.add.at(sums, assignments, X)
    counts = np.bincount(assignments, minlength=k)
    return sums / counts[:, None]


def repair_empty(X, centroids, assignments):
    """Reseat every empty cluster on the row farthest from its own centroid.

    Only rows whose cluster has at least two members are eligible, so a
    repair never empties another cluster. Returns the new assignments and
    centroids (copies) and whether anything was repaired.
    """
    k = centroids.shape[0]
    counts = np.bincount(assignments, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if empty.size == 0:
        return assignments, centroids, False
    assignments = assignments.copy()
    centroids = centroids.copy()
    diff = X - centroids[assignments]
    far = np.einsum("ij,ij->i", diff, diff)
    for j in empty:
        eligible = counts[assignments] > 1
        scores = np.where(eligible, far, -1.0)
        i = int(np.argmax(scores))
        counts[assignments[i]] -= 1
        counts[j] += 1
        assignments[i] = j
        centroids[j] = X[i]
        far[i] = -1.0
    return assignments, centroids, True


def kmeans(rows, config: KMeansConfig, initial_centroids=None) -> KMeansModel:
    """Cluster ``rows`` into ``config.k`` groups.

    ``initial_centroids`` overrides the seeded initialization; it is meant
    for experiments that need to start two runs from the same centroids.
    """
    X = as_matrix(rows)
    n, k = X.shape[0], config.k
    if k > n:
        raise InputError(f"k={k} exceeds the number of rows ({n})")
    if initial_centroids is None:
        centroids = X[init_indices(X, config)].copy()
    else:
        centroids = np.array(initial_centroids, dtype=np.float64)
        if centroids.shape != (k, X.shape[1]):
            raise InputError(f"initial centroids must have shape {(k, X.shape[1])}, got {centroids.shape}")

    labels = None
    history = []
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        new_labels, centroids, _ = repair_empty(X, centroids, assign(X, centroids))
        if labels is not None and np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels
        if not history:
            history.append(within_sse(X, centroids, labels))
        centroids = update_centroids(X, labels, k)
        history.append(within_sse(X, centroids, labels))

    return KMeansModel(
        centroids=centroids,
        assignments=labels,
        iterations_run=iterations,
        converged=converged,
        sse_history=history,
    )
