"""
Evaluation module.
Scores clusterings against ground-truth labels and runs the repeated
seeded comparison of initialization methods.
"""

import json
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import linear_sum_assignment
from sklearn.metrics.cluster import contingency_matrix

import config
from dataset import Dataset
from errors import DataError, UsageError
from kmeans import LloydConfig, lloyd
from logger import get_logger
from seeding import MAX_SEED, InitMethod, SeedConfig, random_centroids, tree_seed
from utils import format_fixed, format_percent

logger = get_logger(__name__)

METRICS: tuple[str, ...] = ("purity", "matched")


def _contingency(assignments: Sequence[object], labels: Sequence[object]) -> np.ndarray:
    predicted = np.asarray(assignments)
    truth = np.asarray(labels)
    if predicted.size == 0:
        raise DataError("cannot score an empty clustering")
    if predicted.shape != truth.shape:
        raise DataError(f"length mismatch: {predicted.size} assignments vs {truth.size} labels")
    return contingency_matrix(truth, predicted)


def purity_accuracy(assignments: Sequence[object], labels: Sequence[object]) -> float:
    """Share of objects carrying their cluster's majority label."""
    table = _contingency(assignments, labels)
    return float(np.sum(np.amax(table, axis=0)) / np.sum(table))


def matched_accuracy(assignments: Sequence[object], labels: Sequence[object]) -> float:
    """Share of objects correctly labelled under the best one-to-one cluster/label mapping."""
    table = _contingency(assignments, labels)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / np.sum(table))


SCORERS = {"purity": purity_accuracy, "matched": matched_accuracy}


@dataclass(frozen=True)
class RunRecord:
    method: str
    run: int
    seed: Optional[int]
    accuracy: float
    runtime: float
    iterations: int
    sse: float
    converged: bool
    assignments: tuple[int, ...] = field(repr=False, compare=False, default=())

    def to_dict(self, include_timing: bool = True) -> dict:
        record = {
            "run": self.run + 1,
            "seed": self.seed,
            "accuracy": self.accuracy,
            "iterations": self.iterations,
            "sse": self.sse,
            "converged": self.converged,
        }
        if include_timing:
            record["runtime"] = self.runtime
        return record


@dataclass(frozen=True)
class MethodRecord:
    method: str
    runs: tuple[RunRecord, ...]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean([r.accuracy for r in self.runs]))

    @property
    def mean_runtime(self) -> float:
        return float(np.mean([r.runtime for r in self.runs]))

    @property
    def mean_iterations(self) -> float:
        return float(np.mean([r.iterations for r in self.runs]))

    @property
    def mean_sse(self) -> float:
        return float(np.mean([r.sse for r in self.runs]))


@dataclass(frozen=True)
class EvaluationReport:
    dataset: str
    k: int
    metric: str
    base_seed: int
    methods: tuple[MethodRecord, ...]

    def method(self, name: str) -> MethodRecord:
        for record in self.methods:
            if record.method == name:
                return record
        raise KeyError(name)

    @property
    def run_count(self) -> int:
        return sum(len(m.runs) for m in self.methods)


def benchmark(
    d: Dataset,
    k: int,
    methods: Sequence[str] = tuple(config.BENCHMARK_METHODS),
    runs: int = config.BENCHMARK_RUNS,
    base_seed: int = config.DEFAULT_SEED,
    seed_config: SeedConfig = SeedConfig(),
    lloyd_config: LloydConfig = LloydConfig(),
    metric: str = config.BENCHMARK_METRIC
) -> EvaluationReport:
    """
    Run every method `runs` times and score each clustering.
    Random runs use seed base_seed + run index. Timing covers seeding and
    Lloyd only (the tree method's matrix and MST are part of its seeding).
    """
    if not d.has_labels:
        raise DataError(f"benchmark needs ground-truth labels; {d.name} has none")
    if runs < 1:
        raise UsageError(f"runs must be >= 1, got {runs}")
    if not 1 <= k <= d.n:
        raise UsageError(f"k must be between 1 and {d.n}, got {k}")
    if metric not in SCORERS:
        raise UsageError(f"unknown metric '{metric}' (choose from {', '.join(METRICS)})")
    parsed = [InitMethod.parse(m) for m in methods]
    if not parsed:
        raise UsageError("at least one method is required")
    if InitMethod.RANDOM in parsed and not 0 <= base_seed <= MAX_SEED - (runs - 1):
        raise UsageError(
            f"seeds {base_seed}..{base_seed + runs - 1} do not fit in an unsigned 64-bit integer"
        )

    scorer = SCORERS[metric]
    records: list[MethodRecord] = []
    for method in parsed:
        run_records: list[RunRecord] = []
        for run in range(runs):
            seed = base_seed + run if method is InitMethod.RANDOM else None
            started = time.perf_counter()
            if method is InitMethod.TREE:
                init = tree_seed(d, k, seed_config)
            else:
                init = random_centroids(d, k, seed)
            result = lloyd(d, init, lloyd_config)
            elapsed = time.perf_counter() - started

            run_records.append(RunRecord(
                method=method.value,
                run=run,
                seed=seed,
                accuracy=scorer(result.assignments, d.labels),
                runtime=elapsed,
                iterations=result.iterations,
                sse=result.sse,
                converged=result.converged,
                assignments=tuple(int(a) for a in result.assignments)
            ))
        record = MethodRecord(method=method.value, runs=tuple(run_records))
        records.append(record)
        logger.info(
            f"{d.name} k={k} {method.value}: mean {metric}={record.mean_accuracy:.4f}, "
            f"mean runtime={record.mean_runtime:.4f}s, mean iterations={record.mean_iterations:.2f}"
        )

    return EvaluationReport(dataset=d.name, k=k, metric=metric, base_seed=base_seed, methods=tuple(records))


def report_to_dict(report: EvaluationReport, include_timing: bool = True) -> dict:
    """Full report with every run record and the per-method means."""
    methods = []
    for record in report.methods:
        means = {
            "accuracy": record.mean_accuracy,
            "iterations": record.mean_iterations,
            "sse": record.mean_sse,
        }
        if include_timing:
            means["runtime"] = record.mean_runtime
        methods.append({
            "method": record.method,
            "runs": [r.to_dict(include_timing) for r in record.runs],
            "means": means,
        })
    return {
        "dataset": report.dataset,
        "k": report.k,
        "metric": report.metric,
        "base_seed": report.base_seed,
        "methods": methods,
    }


def report_to_json(report: EvaluationReport, include_timing: bool = True) -> str:
    return json.dumps(report_to_dict(report, include_timing), indent=2) + "\n"


def summary_frame(report: EvaluationReport, include_timing: bool = True) -> pd.DataFrame:
    """One row per method: dataset, k, method, mean runtime and mean accuracy as text."""
    rows = []
    for record in report.methods:
        row = {
            "dataset": report.dataset,
            "k": report.k,
            "method": record.method,
            "execution_time_sec": format_fixed(record.mean_runtime, config.RUNTIME_DECIMALS) if include_timing else "",
            "accuracy_percent": format_percent(record.mean_accuracy, config.ACCURACY_DECIMALS),
        }
        rows.append(row)
    return pd.DataFrame(rows, columns=["dataset", "k", "method", "execution_time_sec", "accuracy_percent"])
