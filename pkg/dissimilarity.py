"""
Dissimilarity module.
Range-normalized per-feature distances, the comparability indicator delta
and the combined mixed-variable dissimilarity matrix the tree is built on.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

import config
from dataset import Dataset, RangeVector
from errors import DataError, UsageError
from logger import get_logger

logger = get_logger(__name__)


class CombineMode(str, Enum):
    """How per-feature terms are combined into one dissimilarity."""

    MEAN = "mean"
    ROOT_SUM_SQUARE = "root_sum_square"

    @classmethod
    def parse(cls, value: "str | CombineMode") -> "CombineMode":
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(mode.value for mode in cls)
            raise UsageError(f"unknown combine mode '{value}' (choose from {choices})") from None


@dataclass(frozen=True, eq=False)
class DissimilarityMatrix:
    """
    Symmetric n x n matrix with zero diagonal and entries in [0, 1].
    provenance is "feature:<f>" (1-based) or "combined:<mode>".
    comparable holds the delta mask for per-feature matrices.
    """

    values: np.ndarray
    provenance: str
    comparable: Optional[np.ndarray] = None
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise DataError(f"dissimilarity matrix must be square, got shape {values.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.comparable is not None:
            comparable = np.array(self.comparable, dtype=bool)
            comparable.flags.writeable = False
            object.__setattr__(self, "comparable", comparable)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def entry(self, a: int, b: int) -> float:
        return float(self.values[a, b])


def _check_index(d: Dataset, a: int, b: int, f: int) -> None:
    if not (0 <= a < d.n and 0 <= b < d.n):
        raise UsageError(f"object index out of range (dataset has {d.n} objects)")
    if not 0 <= f < d.m:
        raise UsageError(f"feature {f + 1} out of range (dataset has {d.m} features)")


def delta(d: Dataset, a: int, b: int, f: int, zero_zero_skip: bool = config.ZERO_ZERO_SKIP) -> int:
    """
    Return 0 when feature f is missing for a or b, or when both values are
    exactly 0 and zero_zero_skip is on; 1 otherwise.
    """
    _check_index(d, a, b, f)
    if d.missing[a, f] or d.missing[b, f]:
        return 0
    if zero_zero_skip and d.objects[a, f] == 0.0 and d.objects[b, f] == 0.0:
        return 0
    return 1


def per_feature_distance(d: Dataset, a: int, b: int, f: int, ranges: RangeVector) -> float:
    """|a_f - b_f| / range[f]; 0 for a constant feature (range 0)."""
    _check_index(d, a, b, f)
    if d.missing[a, f] or d.missing[b, f]:
        raise DataError(f"feature {f + 1} is missing for object {a + 1 if d.missing[a, f] else b + 1}")
    span = float(ranges.range[f])
    if span == 0.0:
        return 0.0
    return abs(float(d.objects[a, f]) - float(d.objects[b, f])) / span


def _feature_terms(
    d: Dataset,
    f: int,
    ranges: RangeVector,
    zero_zero_skip: bool
) -> tuple[np.ndarray, np.ndarray]:
    column = np.where(d.missing[:, f], 0.0, d.objects[:, f])
    present = ~d.missing[:, f]
    comparable = present[:, None] & present[None, :]
    if zero_zero_skip:
        zero = present & (column == 0.0)
        comparable &= ~(zero[:, None] & zero[None, :])

    span = float(ranges.range[f])
    if span == 0.0:
        terms = np.zeros((d.n, d.n))
    else:
        terms = np.abs(column[:, None] - column[None, :]) / span
    terms = np.where(comparable, terms, 0.0)
    return terms, comparable


def feature_matrix(
    d: Dataset,
    f: int,
    ranges: RangeVector,
    zero_zero_skip: bool = config.ZERO_ZERO_SKIP
) -> DissimilarityMatrix:
    """Per-feature matrix of normalized distances; delta = 0 entries are recorded as 0."""
    if not 0 <= f < d.m:
        raise UsageError(f"feature {f + 1} out of range (dataset has {d.m} features)")
    terms, comparable = _feature_terms(d, f, ranges, zero_zero_skip)
    return DissimilarityMatrix(values=terms, provenance=f"feature:{f + 1}", comparable=comparable)


def combined_matrix(
    d: Dataset,
    ranges: RangeVector,
    mode: CombineMode = CombineMode(config.DEFAULT_COMBINE_MODE),
    zero_zero_skip: bool = config.ZERO_ZERO_SKIP
) -> DissimilarityMatrix:
    """
    Combine per-feature terms over comparable features.
    mean: sum(delta*d) / sum(delta); root_sum_square: sqrt(sum((delta*d)^2)) / sum(delta).
    Pairs with no comparable feature get 1.0 and a diagnostic.
    """
    mode = CombineMode.parse(mode)
    if ranges.m != d.m:
        raise DataError(f"range vector has {ranges.m} features, dataset has {d.m}")

    numerator = np.zeros((d.n, d.n))
    denominator = np.zeros((d.n, d.n))
    for f in range(d.m):
        terms, comparable = _feature_terms(d, f, ranges, zero_zero_skip)
        numerator += terms if mode is CombineMode.MEAN else terms * terms
        denominator += comparable

    if mode is CombineMode.ROOT_SUM_SQUARE:
        numerator = np.sqrt(numerator)

    incomparable = denominator == 0
    np.fill_diagonal(incomparable, False)
    with np.errstate(invalid="ignore", divide="ignore"):
        values = np.where(denominator > 0, numerator / denominator, 1.0)
    np.fill_diagonal(values, 0.0)

    diagnostics: tuple[str, ...] = ()
    pair_count = int(np.triu(incomparable, 1).sum())
    if pair_count:
        message = f"{pair_count} object pair(s) share no comparable feature; dissimilarity set to 1.0"
        logger.warning(message)
        diagnostics = (message,)

    logger.debug(f"Combined {d.m} feature matrices for {d.n} objects with mode={mode.value}")
    return DissimilarityMatrix(values=values, provenance=f"combined:{mode.value}", diagnostics=diagnostics)
