"""
Independent reference implementations used only by the tests.
Written with plain Python loops so they share no code path with the library.
"""

import math

import numpy as np


def brute_force_dissimilarity(rows, ranges, mode="mean", zero_zero_skip=True):
    """Entry-by-entry evaluation of the combined dissimilarity on complete or None-holed rows."""
    n = len(rows)
    out = [[0.0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            terms = []
            for f, span in enumerate(ranges):
                x, y = rows[a][f], rows[b][f]
                if x is None or y is None:
                    continue
                if zero_zero_skip and x == 0 and y == 0:
                    continue
                terms.append(0.0 if span == 0 else abs(x - y) / span)
            if not terms:
                out[a][b] = 1.0
            elif mode == "mean":
                out[a][b] = sum(terms) / len(terms)
            else:
                out[a][b] = math.sqrt(sum(t * t for t in terms)) / len(terms)
    return out


def prim_total_weight(values) -> float:
    """Vertex-growing MST over a dense symmetric matrix; returns the total weight."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    in_tree = [False] * n
    best = [math.inf] * n
    best[0] = 0.0
    total = 0.0
    for _ in range(n):
        u = min((i for i in range(n) if not in_tree[i]), key=lambda i: best[i])
        in_tree[u] = True
        total += best[u]
        for v in range(n):
            if not in_tree[v] and values[u, v] < best[v]:
                best[v] = float(values[u, v])
    return total


def brute_force_assign(objects, centroids):
    """Nearest centroid by full scan, lowest index on ties."""
    labels = []
    for x in objects:
        best_j, best_d = 0, math.inf
        for j, c in enumerate(centroids):
            d = sum((float(a) - float(b)) ** 2 for a, b in zip(x, c))
            if d < best_d:
                best_j, best_d = j, d
        labels.append(best_j)
    return labels


def random_symmetric(rng: np.random.Generator, n: int, levels: int = 32) -> np.ndarray:
    """Symmetric zero-diagonal matrix of dyadic weights in (0, 1]; ties are frequent."""
    values = rng.integers(1, levels + 1, size=(n, n)) / levels
    values = np.triu(values, 1)
    return values + values.T


def random_distinct_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    """Symmetric zero-diagonal matrix whose off-diagonal weights are all distinct."""
    count = n * (n - 1) // 2
    weights = (rng.permutation(count) + 1) / (count + 1)
    values = np.zeros((n, n))
    rows, cols = np.triu_indices(n, 1)
    values[rows, cols] = weights
    return values + values.T
