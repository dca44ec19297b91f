import json
import os

import pytest

from cli import parse_label_column, parse_range_overrides, run
from dataset import load_csv
from errors import UsageError

EXPECTED_MST = """# tree
2 7 0.125000
4 5 0.125000
1 3 0.166667
3 8 0.166667
6 9 0.166667
1 6 0.250000
4 8 0.250000
6 7 0.250000
6 10 0.250000
# pruned
1 6 0.250000
4 8 0.250000
6 7 0.250000
# components
1 3 8
2 7
4 5
6 9 10
"""


def test_parse_label_column() -> None:
    assert parse_label_column(None) is None
    assert parse_label_column("5") == 4
    assert parse_label_column("-1") == -1
    assert parse_label_column("species") == "species"
    with pytest.raises(UsageError):
        parse_label_column("0")


def test_parse_range_overrides() -> None:
    assert parse_range_overrides(["3=8", "1=2.5"]) == {2: 8.0, 0: 2.5}
    assert parse_range_overrides(None) == {}
    for bad in ("3", "x=1", "0=1", "2=-1", "2=0"):
        with pytest.raises(UsageError):
            parse_range_overrides([bad])


def test_mst_text(table1_path: str, capsys) -> None:
    code = run(["mst", "--input", table1_path, "--k", "4", "--range-override", "3=8"])
    assert code == 0
    assert capsys.readouterr().out == EXPECTED_MST


def test_mst_json(table1_path: str, capsys) -> None:
    code = run(["mst", "--input", table1_path, "--k", "4", "--range-override", "3=8", "--format", "json"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["components"] == [[1, 3, 8], [2, 7], [4, 5], [6, 9, 10]]
    assert [(e["u"], e["v"]) for e in data["pruned"]] == [(1, 6), (4, 8), (6, 7)]
    assert sum(e["weight"] for e in data["tree"]) == pytest.approx(1.75)


def test_dissim_first_row(table1_path: str, capsys) -> None:
    assert run(["dissim", "--input", table1_path, "--range-override", "3=8"]) == 0
    first = capsys.readouterr().out.splitlines()[0]
    assert first == (
        "0.000000,0.541667,0.166667,0.416667,0.375000,"
        "0.250000,0.500000,0.333333,0.250000,0.416667"
    )


def test_dissim_single_feature(table1_path: str, capsys) -> None:
    assert run(["dissim", "--input", table1_path, "--feature", "1"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert len(rows) == 10
    assert rows[0].split(",")[1] == "0.625000"
    assert run(["dissim", "--input", table1_path, "--feature", "4"]) == 1


def test_seed_tree(table1_path: str, capsys) -> None:
    assert run(["seed", "--input", table1_path, "--k", "4", "--range-override", "3=8"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "3.000000,5.666667,3.666667",
        "7.500000,1.500000,2.500000",
        "1.000000,8.500000,1.000000",
        "6.666667,3.000000,6.000000",
    ]


def test_seed_random_is_reproducible(table1_path: str, capsys) -> None:
    args = ["seed", "--input", table1_path, "--k", "3", "--init", "random", "--seed", "9", "--format", "json"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["seed"] == 9


def test_cluster_stdout_sections(table1_path: str, capsys) -> None:
    assert run(["cluster", "--input", table1_path, "--k", "4", "--range-override", "3=8"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# assignments\nobject,cluster\n1,1\n2,2\n3,1\n4,3\n5,3\n6,4\n7,2\n8,1\n9,4\n10,4\n")
    assert "# centroids\n" in out
    assert out.endswith("# sse_trace\niteration,sse\n1,32.000000\n")


def test_cluster_writes_directory(table1_path: str, tmp_path) -> None:
    out_dir = tmp_path / "run"
    code = run(["cluster", "--input", table1_path, "--k", "2", "--output", str(out_dir)])
    assert code == 0
    assert sorted(os.listdir(out_dir)) == ["assignments.csv", "centroids.csv", "sse_trace.csv"]
    assignments = (out_dir / "assignments.csv").read_text(encoding="utf-8").splitlines()
    assert assignments[0] == "object,cluster"
    assert len(assignments) == 11
    assert {line.split(",")[1] for line in assignments[1:]} == {"1", "2"}


def test_cluster_json(table1_path: str, capsys) -> None:
    assert run(["cluster", "--input", table1_path, "--k", "4", "--range-override", "3=8", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["assignments"] == [1, 2, 1, 3, 3, 4, 2, 1, 4, 4]
    assert data["iterations"] == 1
    assert data["converged"] is True


def test_export_then_bench(tmp_path, capsys) -> None:
    path = tmp_path / "iris.csv"
    assert run(["export", "--name", "iris", "--output", str(path)]) == 0
    d = load_csv(str(path), label_column=-1)
    assert (d.n, d.m) == (150, 4)

    args = ["bench", "--input", str(path), "--label-col", "5", "--k", "3", "--runs", "3", "--no-timing"]
    assert run(args) == 0
    first = capsys.readouterr().out
    lines = first.splitlines()
    assert lines[0] == "dataset,k,method,execution_time_sec,accuracy_percent"
    assert [line.split(",")[2] for line in lines[1:]] == ["random", "tree"]
    assert run(args) == 0
    assert capsys.readouterr().out == first


def test_bench_json(tmp_path, capsys) -> None:
    path = tmp_path / "wine.csv"
    assert run(["export", "--name", "wine", "--output", str(path)]) == 0
    args = ["bench", "--input", str(path), "--label-col", "-1", "--k", "3", "--runs", "2",
            "--methods", "tree", "--format", "json", "--no-timing"]
    assert run(args) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dataset"] == "wine"
    assert [m["method"] for m in data["methods"]] == ["tree"]
    assert len(data["methods"][0]["runs"]) == 2


@pytest.mark.parametrize("argv, code, message", [
    (["mst", "--k", "0"], 1, "k must be ≥ 1"),
    (["mst", "--k", "11"], 1, "exceeds"),
    (["seed", "--k", "2", "--init", "spread"], 1, "invalid choice"),
    (["seed", "--k", "2", "--init", "random", "--seed", "-3"], 1, "seed"),
    (["bench", "--k", "2"], 1, "--label-col"),
    (["cluster", "--k", "2", "--max-iter", "0"], 1, "max_iterations"),
    (["mst", "--k", "2", "--range-override", "3=0"], 1, "must be > 0"),
])
def test_usage_errors(table1_path: str, capsys, argv: list[str], code: int, message: str) -> None:
    command, rest = argv[0], argv[1:]
    assert run([command, "--input", table1_path, *rest]) == code
    err = capsys.readouterr().err
    assert err.startswith("error: ")
    assert message in err


def test_missing_subcommand_is_usage_error(capsys) -> None:
    assert run([]) == 1
    assert "error:" in capsys.readouterr().err


def test_data_errors(tmp_path, capsys) -> None:
    assert run(["mst", "--input", str(tmp_path / "absent.csv"), "--k", "2"]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,x\n", encoding="utf-8")
    assert run(["seed", "--input", str(bad), "--k", "1"]) == 2
    assert "row 2, column 2" in capsys.readouterr().err


def test_cluster_refuses_missing_values(tmp_path, capsys) -> None:
    holes = tmp_path / "holes.csv"
    holes.write_text("1,2\n,4\n5,6\n", encoding="utf-8")
    assert run(["cluster", "--input", str(holes), "--k", "2"]) == 2
    assert "complete data" in capsys.readouterr().err
