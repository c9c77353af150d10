"""K-means and seeded (semi-supervised) clustering over summary embeddings.

``kmeans_fit`` is the unsupervised baseline: k-means++ seeding, Lloyd
iterations with squared Euclidean distance. ``seeded_fit`` is the
label-aware variant that the production classifier uses: one cluster per
labeled category, centroids initialized from class means, labeled points
pinned to their class cluster throughout, unlabeled points free to move.

Arithmetic is deliberately boring (assignment from the previous centroids,
then plain means in index order) so an independent Lloyd implementation
given the same start produces bit-identical iterates.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeeding, DimensionMismatch, TooFewPoints
from .embeddings import EmbeddingVector, as_matrix
from .taxonomy import check_category

DEFAULT_MAX_ITER = 300
DEFAULT_TOL = 1e-4

MODEL_FORMAT = "patchtriage-cluster-model"


@dataclass
class ClusterModel:
    """k centroids with a cluster-index -> category mapping and training metadata."""

    centroids: np.ndarray
    cluster_to_category: dict[int, int]
    k: int
    seed: int | None
    iterations_run: int
    trained_on: dict[str, int] = field(default_factory=lambda: {"labeled": 0, "unlabeled": 0})
    model_version: str = "unversioned"
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return int(self.centroids.shape[1])

    def validate(self) -> "ClusterModel":
        if self.centroids.ndim != 2 or self.centroids.shape[0] != self.k:
            raise ValueError("centroid matrix must have exactly k rows")
        if sorted(self.cluster_to_category) != list(range(self.k)):
            raise ValueError("cluster_to_category must cover cluster indices 0..k-1")
        return self


def _as_float_matrix(vectors) -> np.ndarray:
    if isinstance(vectors, np.ndarray):
        matrix = vectors.astype(float, copy=False)
    else:
        matrix = as_matrix(vectors)
    if matrix.ndim != 2:
        raise ValueError("expected a 2-D matrix of row vectors")
    return matrix


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """(n, k) matrix of squared Euclidean distances, computed the obvious way."""
    diff = points[:, None, :] - centroids[None, :, :]
    return np.sum(diff * diff, axis=2)


def wcss(points: np.ndarray, centroids: np.ndarray, assignment: np.ndarray) -> float:
    """Within-cluster sum of squares, the objective Lloyd iterations minimize."""
    diff = points - centroids[assignment]
    return float(np.sum(diff * diff))


def kmeans_plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Standard k-means++ start: spread the k seeds by squared-distance weighting."""
    n = points.shape[0]
    first = int(rng.integers(n))
    centroids = [points[first]]
    d2 = np.sum((points - points[first]) ** 2, axis=1)
    for _ in range(1, k):
        total = float(d2.sum())
        if total == 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centroids.append(points[idx])
        d2 = np.minimum(d2, np.sum((points - points[idx]) ** 2, axis=1))
    return np.array(centroids, dtype=float)


def _mean_rows(points: np.ndarray, indices: np.ndarray) -> np.ndarray:
    return np.sum(points[indices], axis=0) / len(indices)


def _lloyd(
    points: np.ndarray,
    centroids: np.ndarray,
    max_iter: int,
    tol: float,
    pinned: np.ndarray | None = None,
    trace: list | None = None,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Shared Lloyd loop.

    ``pinned`` (when given) fixes the cluster of the first len(pinned) points;
    the rest assign to their nearest centroid each round. Returns the final
    centroids, the assignment that produced them, and the iteration count.
    """
    n = points.shape[0]
    k = centroids.shape[0]
    assignment = np.zeros(n, dtype=int)
    previous_objective = None
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        distances = _squared_distances(points, centroids)
        assignment = np.argmin(distances, axis=1)
        if pinned is not None:
            assignment[: len(pinned)] = pinned
        new_centroids = centroids.copy()
        for j in range(k):
            members = np.flatnonzero(assignment == j)
            if len(members) > 0:
                new_centroids[j] = _mean_rows(points, members)
            else:
                # re-seed a starved cluster at the point farthest from it
                away = np.sum((points - centroids[j]) ** 2, axis=1)
                new_centroids[j] = points[int(np.argmax(away))]
        shift = float(np.max(np.sqrt(np.sum((new_centroids - centroids) ** 2, axis=1))))
        centroids = new_centroids
        objective = wcss(points, centroids, assignment)
        if previous_objective is not None:
            assert objective <= previous_objective + 1e-9, (
                f"k-means objective increased: {previous_objective} -> {objective}"
            )
        previous_objective = objective
        if trace is not None:
            trace.append((centroids.copy(), assignment.copy()))
        if shift < tol:
            break
    return centroids, assignment, iterations


def kmeans_fit(
    vectors,
    k: int,
    seed: int = 42,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    init: np.ndarray | None = None,
    trace: list | None = None,
    model_version: str = "unversioned",
) -> tuple[ClusterModel, np.ndarray]:
    """Plain k-means baseline. Cluster index i maps to category i.

    Deterministic for a fixed seed and input order. ``trace``, when a list,
    receives (centroids, assignment) after every iteration: the hook the
    oracle-equivalence tests compare against.
    """
    points = _as_float_matrix(vectors)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if points.shape[0] < k:
        raise TooFewPoints(f"{points.shape[0]} point(s) cannot fill {k} clusters")
    if init is None:
        rng = np.random.default_rng(seed)
        init = kmeans_plus_plus_init(points, k, rng)
    else:
        init = np.asarray(init, dtype=float)
        if init.shape != (k, points.shape[1]):
            raise DimensionMismatch(
                f"init must be ({k}, {points.shape[1]}), got {init.shape}"
            )
    centroids, assignment, iterations = _lloyd(points, init, max_iter, tol, trace=trace)
    model = ClusterModel(
        centroids=centroids,
        cluster_to_category={i: i for i in range(k)},
        k=k,
        seed=seed,
        iterations_run=iterations,
        trained_on={"labeled": 0, "unlabeled": int(points.shape[0])},
        model_version=model_version,
        metadata={"method": "kmeans", "max_iter": max_iter, "tol": tol},
    ).validate()
    return model, assignment


def seeded_fit(
    labeled: list[tuple],
    unlabeled=(),
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    trace: list | None = None,
    model_version: str = "unversioned",
    seed: int | None = None,
) -> tuple[ClusterModel, np.ndarray]:
    """Constrained k-means seeded from labeled class means.

    ``labeled`` is a list of (vector, category) pairs; k becomes the number
    of distinct categories, cluster i belongs to the i-th smallest category,
    and every labeled point stays pinned to its category's cluster. The
    returned assignment lists labeled points first (input order), then
    unlabeled points.
    """
    if not labeled:
        raise DegenerateSeeding("no labeled points")
    categories = sorted({check_category(int(c)) for _, c in labeled})
    if len(categories) < 2:
        raise DegenerateSeeding(
            f"need at least 2 distinct categories, got {len(categories)}"
        )
    cluster_of = {c: i for i, c in enumerate(categories)}
    labeled_matrix = _as_float_matrix([v for v, _ in labeled])
    pinned = np.array([cluster_of[int(c)] for _, c in labeled], dtype=int)
    unlabeled = list(unlabeled)
    if unlabeled:
        unlabeled_matrix = _as_float_matrix(unlabeled)
        if unlabeled_matrix.shape[1] != labeled_matrix.shape[1]:
            raise DimensionMismatch(
                "labeled and unlabeled vectors differ in dimension"
            )
        points = np.vstack([labeled_matrix, unlabeled_matrix])
    else:
        points = labeled_matrix

    k = len(categories)
    init = np.empty((k, points.shape[1]), dtype=float)
    for j in range(k):
        init[j] = _mean_rows(labeled_matrix, np.flatnonzero(pinned == j))

    centroids, assignment, iterations = _lloyd(
        points, init, max_iter, tol, pinned=pinned, trace=trace
    )
    model = ClusterModel(
        centroids=centroids,
        cluster_to_category={i: c for i, c in enumerate(categories)},
        k=k,
        seed=seed,
        iterations_run=iterations,
        trained_on={"labeled": len(labeled), "unlabeled": len(unlabeled)},
        model_version=model_version,
        metadata={"method": "seeded", "max_iter": max_iter, "tol": tol},
    ).validate()
    return model, assignment


def predict_category(model: ClusterModel, vector) -> tuple[int, list[float]]:
    """Category of the nearest centroid, plus all squared distances.

    Ties break toward the lowest cluster index.
    """
    if isinstance(vector, EmbeddingVector):
        vector = vector.values
    v = np.asarray(vector, dtype=float)
    if v.shape != (model.dim,):
        raise DimensionMismatch(f"expected dimension {model.dim}, got {v.shape}")
    distances = np.sum((model.centroids - v) ** 2, axis=1)
    nearest = int(np.argmin(distances))
    return model.cluster_to_category[nearest], [float(d) for d in distances]


def model_to_json(model: ClusterModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "model_version": model.model_version,
        "k": model.k,
        "d": model.dim,
        "seed": model.seed,
        "centroids": [[float(x) for x in row] for row in model.centroids],
        "cluster_to_category": {str(i): c for i, c in model.cluster_to_category.items()},
        "iterations_run": model.iterations_run,
        "trained_on": dict(model.trained_on),
        "metadata": dict(model.metadata),
    }


def model_from_json(doc: dict) -> ClusterModel:
    centroids = np.asarray(doc["centroids"], dtype=float)
    return ClusterModel(
        centroids=centroids,
        cluster_to_category={int(i): int(c) for i, c in doc["cluster_to_category"].items()},
        k=int(doc["k"]),
        seed=doc.get("seed"),
        iterations_run=int(doc.get("iterations_run", 0)),
        trained_on=dict(doc.get("trained_on", {})),
        model_version=str(doc.get("model_version", "unversioned")),
        metadata=dict(doc.get("metadata", {})),
    ).validate()


def save_model(model: ClusterModel, path) -> None:
    """Write the model as a single JSON document, atomically."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(model_to_json(model), fh, sort_keys=True, indent=1)
        fh.write("\n")
    os.replace(tmp, path)


def load_model(path) -> ClusterModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(json.load(fh))
