"""
K-means module.
Lloyd iterations on the raw feature values: Euclidean assignment,
mean update, SSE criterion and the convergence loop.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

import config
from dataset import Dataset
from errors import DataError, UsageError
from logger import get_logger
from seeding import Centroids, InitMethod, SeedConfig, random_centroids, tree_seed

logger = get_logger(__name__)

EMPTY_CLUSTER_POLICIES: tuple[str, ...] = ("reassign_farthest",)


@dataclass(frozen=True)
class LloydConfig:
    max_iterations: int = config.MAX_ITERATIONS
    centroid_tolerance: float = config.CENTROID_TOLERANCE
    empty_cluster_policy: str = config.EMPTY_CLUSTER_POLICY

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise UsageError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.centroid_tolerance >= 0:
            raise UsageError(f"centroid_tolerance must be >= 0, got {self.centroid_tolerance}")
        if self.empty_cluster_policy not in EMPTY_CLUSTER_POLICIES:
            raise UsageError(f"unknown empty cluster policy '{self.empty_cluster_policy}'")


@dataclass(frozen=True, eq=False)
class ClusteringResult:
    """Outcome of one Lloyd run; assignments are 0-based cluster indices."""

    assignments: np.ndarray
    centroids: Centroids
    sse_trace: tuple[float, ...]
    iterations: int
    converged: bool

    @property
    def sse(self) -> float:
        return self.sse_trace[-1] if self.sse_trace else float("nan")


def _complete_objects(d: Dataset) -> np.ndarray:
    if d.has_missing:
        raise DataError(
            f"K-means needs complete data; {d.name} has {int(d.missing.sum())} missing cell(s)"
        )
    return d.objects


def _squared_distances(objects: np.ndarray, points: np.ndarray) -> np.ndarray:
    diff = objects[:, None, :] - points[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def euclidean(a: np.ndarray, b: np.ndarray) -> float:
    """sqrt(sum_f (a_f - b_f)^2)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DataError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def assign(d: Dataset, c: Centroids) -> np.ndarray:
    """Nearest centroid per object; ties go to the lowest cluster index."""
    objects = _complete_objects(d)
    if c.m != d.m:
        raise DataError(f"centroids have {c.m} coordinates, dataset has {d.m} features")
    return np.argmin(_squared_distances(objects, c.points), axis=1)


def _check_assignments(d: Dataset, assignments: np.ndarray, k: int) -> np.ndarray:
    labels = np.asarray(assignments, dtype=int)
    if labels.shape != (d.n,):
        raise DataError(f"expected {d.n} assignments, got {labels.size}")
    if labels.min() < 0 or labels.max() >= k:
        raise DataError(f"assignments must lie in 0..{k - 1}")
    return labels


def _means(objects: np.ndarray, labels: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(labels, minlength=k)
    sums = np.zeros((k, objects.shape[1]))
    np.add.at(sums, labels, objects)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = sums / counts[:, None]
    return means, counts


def reassign_empty(d: Dataset, assignments: np.ndarray, k: int) -> np.ndarray:
    """
    Fill every empty cluster with the object farthest from its current
    centroid, taken from a cluster that keeps at least one member.
    """
    objects = _complete_objects(d)
    labels = _check_assignments(d, assignments, k).copy()
    counts = np.bincount(labels, minlength=k)

    for empty in np.flatnonzero(counts == 0):
        means, counts = _means(objects, labels, k)
        distances = np.sum((objects - means[labels]) ** 2, axis=1)
        distances[counts[labels] < 2] = -1.0
        farthest = int(np.argmax(distances))
        logger.warning(
            f"Cluster {empty + 1} is empty; moving object {farthest + 1} "
            f"from cluster {labels[farthest] + 1}"
        )
        labels[farthest] = empty
        counts = np.bincount(labels, minlength=k)
    return labels


def update_centroids(d: Dataset, assignments: np.ndarray, k: int) -> Centroids:
    """Mean of the objects assigned to each cluster, after the empty-cluster policy."""
    objects = _complete_objects(d)
    labels = reassign_empty(d, assignments, k)
    means, _ = _means(objects, labels, k)
    return Centroids(points=means, method="lloyd")


def sse(d: Dataset, assignments: np.ndarray, c: Centroids) -> float:
    """Sum over clusters of squared Euclidean distances from members to their centroid."""
    objects = _complete_objects(d)
    labels = _check_assignments(d, assignments, c.k)
    if c.m != d.m:
        raise DataError(f"centroids have {c.m} coordinates, dataset has {d.m} features")
    return float(np.sum((objects - c.points[labels]) ** 2))


def lloyd(d: Dataset, init: Centroids, cfg: LloydConfig = LloydConfig()) -> ClusteringResult:
    """
    Alternate assignment and update until an assignment pass changes nothing,
    the largest centroid shift is within a positive tolerance, or
    max_iterations updates have been made.
    """
    objects = _complete_objects(d)
    if init.m != d.m:
        raise DataError(f"initial centroids have {init.m} coordinates, dataset has {d.m} features")
    if init.k > d.n:
        raise UsageError(f"k={init.k} exceeds the number of objects ({d.n})")

    k = init.k
    centroids = init
    labels: Optional[np.ndarray] = None
    trace: list[float] = []
    converged = False

    for iteration in range(1, cfg.max_iterations + 1):
        proposed = assign(d, centroids)
        if labels is not None and np.array_equal(proposed, labels):
            converged = True
            break

        labels = reassign_empty(d, proposed, k)
        updated = update_centroids(d, labels, k)
        shift = float(np.sqrt(np.max(np.sum((updated.points - centroids.points) ** 2, axis=1))))
        centroids = updated
        trace.append(sse(d, labels, centroids))
        logger.debug(f"Lloyd iteration {iteration}: sse={trace[-1]:.6f}, max shift={shift:.6g}")

        if cfg.centroid_tolerance > 0 and shift <= cfg.centroid_tolerance:
            converged = np.array_equal(assign(d, centroids), labels)
            break
    else:
        final = assign(d, centroids)
        converged = np.array_equal(final, labels)
        if not converged:
            logger.warning(f"Lloyd stopped at max_iterations={cfg.max_iterations} without converging")

    result = ClusteringResult(
        assignments=labels,
        centroids=Centroids(points=centroids.points, method=init.method, seed=init.seed),
        sse_trace=tuple(trace),
        iterations=len(trace),
        converged=bool(converged)
    )
    logger.info(
        f"Lloyd on {d.name}: k={k}, iterations={result.iterations}, "
        f"converged={result.converged}, sse={result.sse:.6f}"
    )
    return result


def seed_centroids(
    d: Dataset,
    k: int,
    init: "str | InitMethod" = config.DEFAULT_INIT_METHOD,
    seed: int = config.DEFAULT_SEED,
    seed_config: SeedConfig = SeedConfig()
) -> Centroids:
    """Dispatch to tree or random seeding."""
    method = InitMethod.parse(init)
    if method is InitMethod.TREE:
        return tree_seed(d, k, seed_config)
    return random_centroids(d, k, seed)


def cluster(
    d: Dataset,
    k: int,
    init: "str | InitMethod" = config.DEFAULT_INIT_METHOD,
    seed: int = config.DEFAULT_SEED,
    seed_config: SeedConfig = SeedConfig(),
    lloyd_config: LloydConfig = LloydConfig()
) -> ClusteringResult:
    """Seed then run Lloyd: the full pipeline behind the CLI and the benchmark."""
    _complete_objects(d)
    return lloyd(d, seed_centroids(d, k, init, seed, seed_config), lloyd_config)
