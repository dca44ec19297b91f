import json
import time

import numpy as np
import pytest

from dataset import Dataset, load_bundled
from errors import DataError, UsageError
from evaluation import (
    benchmark,
    matched_accuracy,
    purity_accuracy,
    report_to_dict,
    report_to_json,
    summary_frame,
)
from seeding import MAX_SEED

BUNDLED_BENCHMARK_BUDGET_SEC = 10.0


@pytest.fixture(scope="module")
def iris() -> Dataset:
    return load_bundled("iris")


@pytest.fixture(scope="module")
def wine() -> Dataset:
    return load_bundled("wine")


def test_purity_accuracy() -> None:
    assert purity_accuracy([1, 1, 2, 2], ["a", "a", "a", "b"]) == pytest.approx(0.75)
    assert purity_accuracy([0, 0, 0, 0], ["a", "a", "b", "b"]) == pytest.approx(0.5)
    assert purity_accuracy([0, 1, 2, 3], ["a", "a", "b", "b"]) == pytest.approx(1.0)


def test_matched_accuracy_is_one_to_one() -> None:
    assert matched_accuracy([0, 1, 2, 3], ["a", "a", "b", "b"]) == pytest.approx(0.5)
    assert matched_accuracy([2, 2, 0, 0], ["a", "a", "b", "b"]) == pytest.approx(1.0)


def test_scoring_rejects_bad_input() -> None:
    with pytest.raises(DataError):
        purity_accuracy([0, 1], ["a"])
    with pytest.raises(DataError):
        purity_accuracy([], [])


def test_benchmark_shape_and_seeds() -> None:
    d = Dataset.from_array(
        [[0.0, 0.0], [0.2, 0.1], [5.0, 5.0], [5.1, 4.9], [9.0, 0.0], [9.2, 0.3]],
        labels=["a", "a", "b", "b", "c", "c"],
    )
    report = benchmark(d, 3, runs=4, base_seed=100)
    assert [m.method for m in report.methods] == ["random", "tree"]
    assert report.run_count == 8
    assert [r.seed for r in report.method("random").runs] == [100, 101, 102, 103]
    assert all(r.seed is None for r in report.method("tree").runs)
    assert all(r.accuracy == 1.0 for r in report.method("tree").runs)
    assert all(r.runtime >= 0 for r in report.method("random").runs)
    with pytest.raises(KeyError):
        report.method("kmeans++")


def test_benchmark_validation(table1: Dataset) -> None:
    with pytest.raises(DataError, match="labels"):
        benchmark(table1, 2)
    labelled = Dataset.from_array(table1.objects, labels=list("aabbccddee"))
    with pytest.raises(UsageError):
        benchmark(labelled, 2, runs=0)
    with pytest.raises(UsageError):
        benchmark(labelled, 2, metric="f1")
    with pytest.raises(UsageError):
        benchmark(labelled, 11)


def test_benchmark_rejects_seeds_past_64_bits() -> None:
    d = Dataset.from_array([[0.0], [0.1], [5.0], [5.2]], labels=["x", "x", "y", "y"])
    with pytest.raises(UsageError, match="64-bit"):
        benchmark(d, 2, runs=3, base_seed=MAX_SEED - 1)
    report = benchmark(d, 2, runs=2, base_seed=MAX_SEED - 1)
    assert [r.seed for r in report.method("random").runs] == [MAX_SEED - 1, MAX_SEED]
    assert len(benchmark(d, 2, runs=3, base_seed=MAX_SEED, methods=["tree"]).methods) == 1


def test_report_serialization() -> None:
    d = Dataset.from_array([[0.0], [0.1], [5.0], [5.2]], labels=["x", "x", "y", "y"])
    report = benchmark(d, 2, runs=2)

    data = json.loads(report_to_json(report, include_timing=False))
    assert data["k"] == 2
    assert data["metric"] == "purity"
    assert [r["run"] for r in data["methods"][0]["runs"]] == [1, 2]
    assert "runtime" not in data["methods"][0]["runs"][0]
    assert "runtime" not in data["methods"][0]["means"]
    assert "runtime" in report_to_dict(report)["methods"][1]["means"]

    frame = summary_frame(report, include_timing=False)
    assert list(frame.columns) == ["dataset", "k", "method", "execution_time_sec", "accuracy_percent"]
    assert list(frame["method"]) == ["random", "tree"]
    assert list(frame["accuracy_percent"]) == ["100.0", "100.0"]
    assert list(frame["execution_time_sec"]) == ["", ""]


def test_iris_tree_seeding_beats_random(iris: Dataset) -> None:
    started = time.perf_counter()
    report = benchmark(iris, 3, runs=10, base_seed=0)
    assert time.perf_counter() - started < BUNDLED_BENCHMARK_BUDGET_SEC
    tree = report.method("tree")
    random = report.method("random")
    assert tree.mean_accuracy >= random.mean_accuracy
    assert tree.mean_accuracy >= 0.70
    assert all(r.converged for r in tree.runs)


def test_wine_tree_seeding_is_deterministic(wine: Dataset) -> None:
    report = benchmark(wine, 3, runs=10, methods=["tree"])
    runs = report.method("tree").runs
    assert len({r.assignments for r in runs}) == 1
    assert len({r.accuracy for r in runs}) == 1
    assert len({r.iterations for r in runs}) == 1


def test_wine_matched_accuracy_bounds(wine: Dataset) -> None:
    report = benchmark(wine, 3, runs=2, metric="matched")
    for record in report.methods:
        assert 1 / 3 <= record.mean_accuracy <= 1.0
        assert np.isfinite(record.mean_sse)


def test_wine_tree_seeding_beats_random(wine: Dataset) -> None:
    started = time.perf_counter()
    report = benchmark(wine, 3, runs=10, base_seed=0)
    assert time.perf_counter() - started < BUNDLED_BENCHMARK_BUDGET_SEC
    assert report.method("tree").mean_accuracy >= report.method("random").mean_accuracy


@pytest.mark.parametrize("name", ["iris", "wine"])
def test_tree_seeding_needs_no_more_iterations(name: str) -> None:
    report = benchmark(load_bundled(name), 3, runs=10, base_seed=0)
    assert report.method("tree").mean_iterations <= report.method("random").mean_iterations


def test_purity_ignores_relabeling() -> None:
    labels = ["a", "b", "b", "c", "c", "c", "a"]
    assignments = [0, 1, 1, 2, 2, 0, 0]
    base = purity_accuracy(assignments, labels)
    assert purity_accuracy([{0: 2, 1: 0, 2: 1}[a] for a in assignments], labels) == base
    assert purity_accuracy(assignments, [{"a": "z", "b": "y", "c": "x"}[x] for x in labels]) == base
    assert purity_accuracy(labels, labels) == 1.0
    assert purity_accuracy([0, 0, 0], ["a", "a", "b"]) == pytest.approx(2 / 3)
    assert base >= 3 / 7


def test_single_run_single_method() -> None:
    d = Dataset.from_array([[0.0], [0.1], [5.0]], labels=["x", "x", "y"])
    report = benchmark(d, 2, methods=["tree"], runs=1)
    record = report.method("tree")
    assert report.run_count == 1
    assert record.mean_accuracy == record.runs[0].accuracy
    assert record.mean_sse == record.runs[0].sse


def test_benchmark_is_reproducible(iris: Dataset) -> None:
    a = benchmark(iris, 3, runs=3, base_seed=17)
    b = benchmark(iris, 3, runs=3, base_seed=17)
    for x, y in zip(a.methods, b.methods):
        assert [(r.accuracy, r.iterations, r.sse) for r in x.runs] == [(r.accuracy, r.iterations, r.sse) for r in y.runs]
        assert x.mean_accuracy == float(np.mean([r.accuracy for r in x.runs]))
