"""
Spanning tree module.
Minimum spanning tree over the complete dissimilarity graph, pruning of the
k-1 heaviest branches and extraction of the resulting sub-trees.
"""

from dataclasses import dataclass

import numpy as np

from dissimilarity import DissimilarityMatrix
from errors import DataError, InvariantError, UsageError
from logger import get_logger

logger = get_logger(__name__)


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by rank."""

    def __init__(self, n: int) -> None:
        self.parents = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parents[root] != root:
            root = self.parents[root]
        while self.parents[x] != root:
            self.parents[x], x = root, self.parents[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge the sets of x and y; False when they were already joined."""
        x = self.find(x)
        y = self.find(y)
        if x == y:
            return False
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        self.parents[y] = x
        if self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        return True


@dataclass(frozen=True)
class Edge:
    """Tree branch between objects u < v (0-based)."""

    u: int
    v: int
    weight: float

    def __post_init__(self) -> None:
        if not self.u < self.v:
            raise InvariantError(f"edge endpoints must satisfy u < v, got ({self.u}, {self.v})")
        if self.weight < 0:
            raise InvariantError(f"edge ({self.u}, {self.v}) has negative weight {self.weight}")


@dataclass(frozen=True)
class SpanningTree:
    n: int
    edges: tuple[Edge, ...]

    @property
    def total_weight(self) -> float:
        return float(sum(e.weight for e in self.edges))


@dataclass(frozen=True)
class Forest:
    """
    Tree minus pruned branches. components is the canonical partition:
    each component sorted ascending, components ordered by smallest member.
    """

    n: int
    edges: tuple[Edge, ...]
    components: tuple[tuple[int, ...], ...]
    pruned: tuple[Edge, ...]


def _partition(n: int, edges: tuple[Edge, ...]) -> tuple[tuple[int, ...], ...]:
    sets = UnionFind(n)
    for e in edges:
        sets.union(e.u, e.v)
    groups: dict[int, list[int]] = {}
    for node in range(n):
        groups.setdefault(sets.find(node), []).append(node)
    return tuple(sorted((tuple(members) for members in groups.values()), key=lambda c: c[0]))


def build_mst(dm: DissimilarityMatrix) -> SpanningTree:
    """
    Greedy edge-sorted MST with union-find acceptance.
    Candidates are processed in ascending (weight, u, v) order, so ties
    always resolve to the same tree.
    """
    n = dm.n
    if n < 2:
        raise DataError(f"a spanning tree needs at least 2 objects, got {n}")
    if not np.array_equal(dm.values, dm.values.T):
        raise DataError("dissimilarity matrix is not symmetric")
    if np.any(np.diag(dm.values) != 0):
        raise DataError("dissimilarity matrix diagonal is not zero")

    rows, cols = np.triu_indices(n, 1)
    weights = dm.values[rows, cols]
    # triu_indices is already (u, v) ascending, a stable sort keeps that order within ties
    order = np.argsort(weights, kind="stable")

    sets = UnionFind(n)
    accepted: list[Edge] = []
    for idx in order:
        u, v = int(rows[idx]), int(cols[idx])
        if sets.union(u, v):
            accepted.append(Edge(u, v, float(weights[idx])))
            if len(accepted) == n - 1:
                break

    if len(accepted) != n - 1:
        raise InvariantError(f"spanning tree has {len(accepted)} edges, expected {n - 1}")

    tree = SpanningTree(n=n, edges=tuple(accepted))
    logger.debug(f"Built MST over {n} objects, total weight {tree.total_weight:.6f}")
    return tree


def prune_heaviest(t: SpanningTree, k: int) -> Forest:
    """
    Remove the k-1 heaviest branches, ordered by descending weight then
    ascending (u, v); the forest has exactly k components.
    """
    if not 1 <= k <= t.n:
        raise UsageError(f"k must be between 1 and {t.n}, got {k}")

    ranked = sorted(t.edges, key=lambda e: (-e.weight, e.u, e.v))
    pruned = tuple(ranked[:k - 1])
    removed = set(pruned)
    retained = tuple(e for e in t.edges if e not in removed)
    parts = _partition(t.n, retained)

    if len(parts) != k:
        raise InvariantError(f"pruning {k - 1} branches produced {len(parts)} components, expected {k}")

    if pruned:
        logger.info(
            "Pruned branches: "
            + ", ".join(f"({e.u + 1},{e.v + 1})={e.weight:.6f}" for e in pruned)
        )
    return Forest(n=t.n, edges=retained, components=parts, pruned=pruned)


def components(f: Forest) -> list[list[int]]:
    """Disjoint sorted components covering all nodes, ordered by smallest member."""
    return [list(part) for part in f.components]
