"""
Dataset module.
Loads, validates and characterizes numeric tabular data (CSV or bundled
copies of Iris/Wine) into the immutable Dataset used by every other module.
"""

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

import config
from errors import DataError, UsageError
from logger import get_logger
from utils import write_text_atomic

logger = get_logger(__name__)

LabelSelector = Union[int, str, None]


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    n objects x m real features, a missing-value mask and optional class labels.
    Masked cells hold NaN and are never read by the numeric code.
    """

    objects: np.ndarray
    missing: np.ndarray
    labels: Optional[np.ndarray] = None
    feature_names: Optional[tuple[str, ...]] = None
    name: str = "dataset"

    def __post_init__(self) -> None:
        objects = np.array(self.objects, dtype=float)
        if objects.ndim != 2:
            raise DataError(f"objects must be a 2-D table, got {objects.ndim} dimension(s)")
        n, m = objects.shape
        if n < 1 or m < 1:
            raise DataError(f"dataset needs at least one object and one feature, got {n}x{m}")

        missing = np.array(self.missing, dtype=bool)
        if missing.shape != objects.shape:
            raise DataError(f"missing mask shape {missing.shape} does not match objects {objects.shape}")
        objects = np.where(missing, np.nan, objects)
        if not np.all(np.isfinite(objects[~missing])):
            raise DataError("observed feature values must be finite numbers")

        labels = None
        if self.labels is not None:
            labels = np.asarray([str(label) for label in self.labels])
            if labels.shape != (n,):
                raise DataError(f"expected {n} labels, got {labels.size}")
            labels = _readonly(labels)

        feature_names = None
        if self.feature_names is not None:
            feature_names = tuple(str(f) for f in self.feature_names)
            if len(feature_names) != m:
                raise DataError(f"expected {m} feature names, got {len(feature_names)}")

        object.__setattr__(self, "objects", _readonly(objects))
        object.__setattr__(self, "missing", _readonly(missing))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", feature_names)

    @classmethod
    def from_array(
        cls,
        values: Sequence[Sequence[float]],
        labels: Optional[Sequence[object]] = None,
        feature_names: Optional[Sequence[str]] = None,
        name: str = "dataset"
    ) -> "Dataset":
        """Build a Dataset from a numeric table where NaN marks a missing value."""
        objects = np.array(values, dtype=float)
        return cls(
            objects=objects,
            missing=np.isnan(objects),
            labels=None if labels is None else list(labels),
            feature_names=None if feature_names is None else tuple(feature_names),
            name=name
        )

    @property
    def n(self) -> int:
        return int(self.objects.shape[0])

    @property
    def m(self) -> int:
        return int(self.objects.shape[1])

    @property
    def has_missing(self) -> bool:
        return bool(self.missing.any())

    @property
    def has_labels(self) -> bool:
        return self.labels is not None


@dataclass(frozen=True, eq=False)
class RangeVector:
    """Per-feature observed minimum, maximum and (possibly overridden) range."""

    minimum: np.ndarray
    maximum: np.ndarray
    range: np.ndarray

    @property
    def m(self) -> int:
        return int(self.range.shape[0])


@dataclass(frozen=True)
class Diagnostic:
    """A non-fatal finding about a dataset; index is 0-based, message is 1-based."""

    kind: str
    index: int
    message: str


def _resolve_label_column(
    label_column: LabelSelector,
    header: Optional[list[str]],
    width: int,
    path: str
) -> Optional[int]:
    if label_column is None:
        return None
    if isinstance(label_column, str):
        if header is None:
            raise UsageError(f"{path}: label column '{label_column}' given by name but the file has no header")
        names = [h.strip() for h in header]
        if label_column not in names:
            raise DataError(f"{path}: label column '{label_column}' not found in header")
        return names.index(label_column)
    index = label_column + width if label_column < 0 else label_column
    if not 0 <= index < width:
        raise DataError(
            f"{path}: label column {label_column + 1 if label_column >= 0 else label_column} "
            f"out of range (file has {width} columns)"
        )
    return index


def load_csv(
    path: str,
    has_header: bool = False,
    label_column: LabelSelector = None,
    missing_token: str = config.DEFAULT_MISSING_TOKEN,
    delimiter: str = config.CSV_DELIMITER,
    name: Optional[str] = None
) -> Dataset:
    """
    Load a CSV file into a Dataset.
    label_column is a 0-based index (negative counts from the end) or a header name.
    Errors name the 1-based row (blank lines not counted) and column of the offending cell.
    """
    try:
        frame = pd.read_csv(
            path,
            sep=delimiter,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            encoding="utf-8"
        )
    except (OSError, UnicodeDecodeError) as e:
        raise DataError(f"cannot read {path}: {e}") from e
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: file is empty") from None
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: malformed CSV: {e}") from e

    # Short rows come back padded with NaN; every real cell is a string.
    present = frame.notna().to_numpy()
    cells = frame.to_numpy(dtype=object)
    widths = present.sum(axis=1)
    rows = [(i + 1, [str(cell) for cell in cells[i, :widths[i]]]) for i in range(len(cells))]

    header: Optional[list[str]] = None
    if has_header:
        if not rows:
            raise DataError(f"{path}: missing header row")
        header = rows.pop(0)[1]

    if not rows:
        raise DataError(f"{path}: no data rows")

    width = len(header) if header is not None else len(rows[0][1])
    for line, row in rows:
        if len(row) != width:
            raise DataError(f"{path}: row {line} has {len(row)} columns, expected {width}")

    label_index = _resolve_label_column(label_column, header, width, path)
    feature_columns = [c for c in range(width) if c != label_index]
    if not feature_columns:
        raise DataError(f"{path}: no feature columns besides the label column")

    token = missing_token.strip()
    values = np.zeros((len(rows), len(feature_columns)), dtype=float)
    missing = np.zeros_like(values, dtype=bool)
    labels: Optional[list[str]] = [] if label_index is not None else None

    for i, (line, row) in enumerate(rows):
        for j, c in enumerate(feature_columns):
            cell = row[c].strip()
            if cell == token:
                missing[i, j] = True
                continue
            try:
                number = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {line}, column {c + 1}: cannot parse {row[c]!r} as a number") from None
            if not np.isfinite(number):
                raise DataError(f"{path}: row {line}, column {c + 1}: non-finite value {row[c]!r}")
            values[i, j] = number
        if labels is not None:
            labels.append(row[label_index].strip())

    feature_names = None
    if header is not None:
        feature_names = tuple(header[c].strip() for c in feature_columns)

    dataset = Dataset(
        objects=values,
        missing=missing,
        labels=labels,
        feature_names=feature_names,
        name=name or path
    )
    logger.info(
        f"Loaded {path}: n={dataset.n}, m={dataset.m}, "
        f"missing cells={int(missing.sum())}, labels={'yes' if labels is not None else 'no'}"
    )
    return dataset


def to_csv_text(
    d: Dataset,
    include_header: bool = False,
    missing_token: str = config.DEFAULT_MISSING_TOKEN,
    delimiter: str = config.CSV_DELIMITER
) -> str:
    """Render a Dataset as CSV text with the label column (if any) last."""
    names = list(d.feature_names) if d.feature_names else [f"f{j + 1}" for j in range(d.m)]
    # repr keeps every float exact through a reload.
    cells = [
        [missing_token if d.missing[i, j] else repr(float(d.objects[i, j])) for j in range(d.m)]
        for i in range(d.n)
    ]
    frame = pd.DataFrame(cells, columns=names, dtype=object)
    if d.labels is not None:
        frame.insert(d.m, "label", [str(label) for label in d.labels], allow_duplicates=True)

    return frame.to_csv(sep=delimiter, header=include_header, index=False, lineterminator="\n")


def write_csv(
    d: Dataset,
    path: str,
    include_header: bool = False,
    missing_token: str = config.DEFAULT_MISSING_TOKEN,
    delimiter: str = config.CSV_DELIMITER
) -> None:
    """Write a Dataset to path so that load_csv with the same options reads it back."""
    write_text_atomic(path, to_csv_text(d, include_header, missing_token, delimiter))


def load_bundled(name: str) -> Dataset:
    """Return Iris or Wine from the copies bundled with scikit-learn."""
    from sklearn.datasets import load_iris, load_wine

    loaders = {"iris": load_iris, "wine": load_wine}
    key = name.lower()
    if key not in loaders:
        raise UsageError(f"unknown bundled dataset '{name}' (choose from {', '.join(config.BUNDLED_DATASETS)})")

    bunch = loaders[key]()
    labels = np.asarray(bunch.target_names)[bunch.target]
    return Dataset.from_array(
        bunch.data,
        labels=labels,
        feature_names=[str(f) for f in bunch.feature_names],
        name=key
    )


def feature_ranges(d: Dataset, overrides: Optional[Mapping[int, float]] = None) -> RangeVector:
    """
    Observed per-feature min, max and range (max - min) over non-missing values.
    A feature with fewer than two observations has range 0. overrides replaces
    the range (not min/max) of selected 0-based features with a positive value
    at least as large as the observed range, so every per-feature term stays in [0, 1].
    """
    counts = (~d.missing).sum(axis=0)
    minimum = np.where(d.missing, np.inf, d.objects).min(axis=0)
    maximum = np.where(d.missing, -np.inf, d.objects).max(axis=0)
    minimum = np.where(counts > 0, minimum, np.nan)
    maximum = np.where(counts > 0, maximum, np.nan)
    span = np.where(counts >= 2, maximum - minimum, 0.0)

    for f, value in (overrides or {}).items():
        if not 0 <= f < d.m:
            raise UsageError(f"range override for feature {f + 1}: dataset has {d.m} features")
        if not np.isfinite(value) or value <= 0:
            raise UsageError(f"range override for feature {f + 1} must be > 0, got {value}")
        if value < span[f]:
            raise UsageError(
                f"range override for feature {f + 1} must cover the observed range {span[f]}, got {value}"
            )
        span[f] = float(value)
        logger.debug(f"Range of feature {f + 1} overridden to {value}")

    return RangeVector(
        minimum=_readonly(minimum),
        maximum=_readonly(maximum),
        range=_readonly(span.astype(float))
    )


def validate(d: Dataset) -> list[Diagnostic]:
    """List entirely missing features, constant features, entirely missing objects and duplicates."""
    diagnostics: list[Diagnostic] = []
    counts = (~d.missing).sum(axis=0)
    ranges = feature_ranges(d)

    for f in range(d.m):
        if counts[f] == 0:
            diagnostics.append(Diagnostic("feature_missing", f, f"feature {f + 1} is entirely missing"))
        elif ranges.maximum[f] == ranges.minimum[f]:
            diagnostics.append(Diagnostic("constant_feature", f, f"feature {f + 1} is constant"))

    seen: dict[tuple, int] = {}
    for i in range(d.n):
        if d.missing[i].all():
            diagnostics.append(Diagnostic("object_missing", i, f"object {i + 1} is entirely missing"))
            continue
        key = tuple(None if d.missing[i, j] else float(d.objects[i, j]) for j in range(d.m))
        if key in seen:
            diagnostics.append(
                Diagnostic("duplicate_object", i, f"object {i + 1} duplicates object {seen[key] + 1}")
            )
        else:
            seen[key] = i

    for diagnostic in diagnostics:
        logger.warning(f"{d.name}: {diagnostic.message}")
    return diagnostics
