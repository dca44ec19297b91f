"""
Seeding module.
Initial centroids from the dissimilarity tree (matrix, MST, pruning,
sub-tree means) and the random baseline of standard K-means.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

import numpy as np

import config
from dataset import Dataset, feature_ranges
from dissimilarity import CombineMode, combined_matrix
from errors import DataError, UsageError
from logger import get_logger
from spanning_tree import Forest, build_mst, components, prune_heaviest

logger = get_logger(__name__)

MAX_SEED: int = 2 ** 64 - 1


class InitMethod(str, Enum):
    TREE = "tree"
    RANDOM = "random"

    @classmethod
    def parse(cls, value: "str | InitMethod") -> "InitMethod":
        try:
            return cls(value)
        except ValueError:
            raise UsageError(f"unknown init method '{value}' (choose from tree, random)") from None


@dataclass(frozen=True, eq=False)
class Centroids:
    """k x m cluster centers and the method that produced them."""

    points: np.ndarray
    method: str
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=float)
        if points.ndim != 2 or points.shape[0] < 1:
            raise DataError(f"centroids must be a non-empty k x m table, got shape {points.shape}")
        if not np.all(np.isfinite(points)):
            raise DataError("centroid coordinates must be finite")
        points.flags.writeable = False
        object.__setattr__(self, "points", points)

    @property
    def k(self) -> int:
        return int(self.points.shape[0])

    @property
    def m(self) -> int:
        return int(self.points.shape[1])


@dataclass(frozen=True)
class SeedConfig:
    """Options of the tree seeding; range_overrides keys are 0-based features."""

    combine_mode: CombineMode = CombineMode(config.DEFAULT_COMBINE_MODE)
    range_overrides: Mapping[int, float] = field(default_factory=dict)
    zero_zero_skip: bool = config.ZERO_ZERO_SKIP


def _check_k(d: Dataset, k: int) -> None:
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    if k > d.n:
        raise UsageError(f"k={k} exceeds the number of objects ({d.n})")


def centroids_from_components(d: Dataset, parts: Sequence[Sequence[int]], method: str = "tree") -> Centroids:
    """Coordinate-wise mean of each part, skipping missing values per coordinate."""
    covered = sorted(i for part in parts for i in part)
    if covered != list(range(d.n)):
        raise DataError(f"parts must partition the {d.n} objects exactly once")

    observed = np.where(d.missing, 0.0, d.objects)
    present = (~d.missing).astype(float)
    points = np.zeros((len(parts), d.m))
    for j, part in enumerate(parts):
        if len(part) == 0:
            raise DataError(f"part {j + 1} is empty")
        members = np.asarray(part, dtype=int)
        counts = present[members].sum(axis=0)
        if np.any(counts == 0):
            f = int(np.flatnonzero(counts == 0)[0])
            raise DataError(f"feature {f + 1} has no observed value in part {j + 1}")
        points[j] = observed[members].sum(axis=0) / counts
    return Centroids(points=points, method=method)


def tree_partition(d: Dataset, k: int, cfg: SeedConfig = SeedConfig()) -> Forest:
    """Steps one to three of the tree seeding: matrix, MST, pruning of k-1 branches."""
    _check_k(d, k)
    ranges = feature_ranges(d, cfg.range_overrides)
    dm = combined_matrix(d, ranges, cfg.combine_mode, cfg.zero_zero_skip)
    tree = build_mst(dm)
    return prune_heaviest(tree, k)


def tree_seed(d: Dataset, k: int, cfg: SeedConfig = SeedConfig()) -> Centroids:
    """Initial centroids as the means of the k sub-trees of the pruned dissimilarity tree."""
    _check_k(d, k)
    if k == 1:
        parts = [list(range(d.n))]
    else:
        parts = components(tree_partition(d, k, cfg))
    centroids = centroids_from_components(d, parts, method="tree")
    logger.info(f"Tree seeding on {d.name}: k={k}, component sizes {[len(p) for p in parts]}")
    return centroids


def random_centroids(d: Dataset, k: int, seed: int) -> Centroids:
    """
    k distinct objects drawn uniformly without replacement.
    The generator is numpy's PCG64 seeded with the caller's 64-bit seed.
    """
    _check_k(d, k)
    if not 0 <= seed <= MAX_SEED:
        raise UsageError(f"seed must be an unsigned 64-bit integer, got {seed}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(d.n, size=k, replace=False)
    if d.missing[chosen].any():
        raise DataError("random seeding picked an object with missing values; impute or drop them first")
    logger.debug(f"Random seeding with seed={seed}: objects {[int(i) + 1 for i in chosen]}")
    return Centroids(points=d.objects[chosen], method="random", seed=seed)
