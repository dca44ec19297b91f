"""
Command-line interface for dissimilarity-tree K-means.

Subcommands:
    dissim   combined or per-feature dissimilarity matrix
    mst      dissimilarity tree edge list, pruned branches and components
    seed     initial centroids (tree or random)
    cluster  full run: assignments, centroids, SSE trace
    bench    repeated comparison of initialization methods
    export   write a bundled dataset (iris, wine) as CSV

Feature, object and cluster numbers on the command line and in every
output are 1-based.
"""

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np
import pandas as pd

import config
from dataset import Dataset, feature_ranges, load_bundled, load_csv, to_csv_text, validate
from db import get_method_summary, get_recent_runs, init_db, insert_report
from dissimilarity import CombineMode, DissimilarityMatrix, combined_matrix, feature_matrix
from errors import ClusteringError, DataError, UsageError
from evaluation import METRICS, benchmark, report_to_json, summary_frame
from kmeans import ClusteringResult, LloydConfig, cluster, seed_centroids
from logger import get_logger, setup_logging
from seeding import MAX_SEED, Centroids, SeedConfig
from spanning_tree import Forest, SpanningTree, build_mst, prune_heaviest
from utils import csv_line, env_str, format_fixed, load_env, write_text_atomic

logger = get_logger(__name__)

SUBCOMMANDS: tuple[str, ...] = ("dissim", "mst", "seed", "cluster", "bench", "history", "export")

HISTORY_RUN_COLUMNS: tuple[str, ...] = (
    "id", "timestamp", "dataset", "k", "metric", "method", "run", "seed",
    "accuracy", "runtime", "iterations", "sse", "converged"
)
HISTORY_SUMMARY_COLUMNS: tuple[str, ...] = (
    "k", "method", "run_count", "mean_accuracy", "mean_runtime", "mean_iterations"
)


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _positive_k(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise UsageError(f"k must be an integer, got '{text}'") from None
    if k < 1:
        raise UsageError("k must be ≥ 1")
    return k


def _seed(text: str) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise UsageError(f"seed must be an integer, got '{text}'") from None
    if not 0 <= seed <= MAX_SEED:
        raise UsageError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def parse_label_column(text: Optional[str]) -> "int | str | None":
    """1-based column number (negative counts from the end) or a header name."""
    if text is None:
        return None
    try:
        index = int(text)
    except ValueError:
        return text
    if index == 0:
        raise UsageError("--label-col is 1-based; 0 is not a column")
    return index - 1 if index > 0 else index


def parse_range_overrides(items: Optional[Sequence[str]]) -> dict[int, float]:
    """Turn repeated 'f=value' flags (1-based f) into a 0-based override map."""
    overrides: dict[int, float] = {}
    for item in items or []:
        feature, sep, value = item.partition("=")
        try:
            f = int(feature)
            span = float(value)
        except ValueError:
            raise UsageError(f"--range-override expects f=value, got '{item}'") from None
        if not sep or f < 1:
            raise UsageError(f"--range-override expects f=value with 1-based f, got '{item}'")
        if not np.isfinite(span) or span <= 0:
            raise UsageError(f"range override for feature {f} must be > 0, got {value}")
        overrides[f - 1] = span
    return overrides


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="CSV dataset path")
    common.add_argument("--has-header", action="store_true", help="first row is a header")
    common.add_argument("--label-col", help="label column: 1-based number or header name")
    common.add_argument("--missing-token", default=config.DEFAULT_MISSING_TOKEN, help="cell text meaning 'missing'")
    common.add_argument("--combine", default=config.DEFAULT_COMBINE_MODE, choices=[m.value for m in CombineMode])
    common.add_argument("--range-override", action="append", metavar="F=VALUE",
                        help="replace the range of feature F (1-based); repeatable")
    common.add_argument("--no-zero-zero-skip", action="store_true",
                        help="compare features where both values are 0")
    common.add_argument("--output", help="output path (stdout when absent)")
    common.add_argument("--format", default="csv", choices=["csv", "json"])
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = ArgumentParser(prog="dtree-kmeans", description="Dissimilarity-tree seeding for K-means")
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    sub.required = True

    dissim = sub.add_parser("dissim", parents=[common], help="dump a dissimilarity matrix")
    dissim.add_argument("--feature", type=int, help="per-feature matrix of feature F (1-based)")

    mst = sub.add_parser("mst", parents=[common], help="dump the dissimilarity tree and its k sub-trees")
    mst.add_argument("--k", type=_positive_k, required=True)

    seed = sub.add_parser("seed", parents=[common], help="dump initial centroids")
    seed.add_argument("--k", type=_positive_k, required=True)
    seed.add_argument("--init", default=config.DEFAULT_INIT_METHOD, choices=["tree", "random"])
    seed.add_argument("--seed", type=_seed, default=config.DEFAULT_SEED)

    run = sub.add_parser("cluster", parents=[common], help="seed and run Lloyd")
    run.add_argument("--k", type=_positive_k, required=True)
    run.add_argument("--init", default=config.DEFAULT_INIT_METHOD, choices=["tree", "random"])
    run.add_argument("--seed", type=_seed, default=config.DEFAULT_SEED)
    run.add_argument("--max-iter", type=int, default=config.MAX_ITERATIONS)
    run.add_argument("--tol", type=float, default=config.CENTROID_TOLERANCE)

    bench = sub.add_parser("bench", parents=[common], help="compare initialization methods")
    bench.add_argument("--k", type=_positive_k, required=True)
    bench.add_argument("--runs", type=int, default=config.BENCHMARK_RUNS)
    bench.add_argument("--seed", type=_seed, default=config.DEFAULT_SEED, help="base seed")
    bench.add_argument("--methods", default=",".join(config.BENCHMARK_METHODS), help="comma-separated methods")
    bench.add_argument("--metric", default=config.BENCHMARK_METRIC, choices=list(METRICS))
    bench.add_argument("--max-iter", type=int, default=config.MAX_ITERATIONS)
    bench.add_argument("--tol", type=float, default=config.CENTROID_TOLERANCE)
    bench.add_argument("--no-timing", action="store_true", help="omit runtimes (stable golden output)")
    bench.add_argument("--db", help="append run records to this SQLite database")

    history = sub.add_parser("history", help="show benchmark runs stored by bench --db")
    history.add_argument("--db", help="SQLite database (default: DTREE_DB_PATH or " + config.DEFAULT_DB_PATH + ")")
    history.add_argument("--dataset", help="summarize the runs of this dataset per (k, method)")
    history.add_argument("--limit", type=int, default=config.HISTORY_LIMIT, help="most recent runs to list")
    history.add_argument("--output", help="output path (stdout when absent)")
    history.add_argument("--format", default="csv", choices=["csv", "json"])
    history.add_argument("-v", "--verbose", action="store_true")

    export = sub.add_parser("export", help="write a bundled dataset as CSV (label column last)")
    export.add_argument("--name", required=True, choices=list(config.BUNDLED_DATASETS))
    export.add_argument("--output", help="output path (stdout when absent)")
    export.add_argument("-v", "--verbose", action="store_true")

    return parser


def _seed_config(args: argparse.Namespace) -> SeedConfig:
    return SeedConfig(
        combine_mode=CombineMode.parse(args.combine),
        range_overrides=parse_range_overrides(args.range_override),
        zero_zero_skip=not args.no_zero_zero_skip
    )


def _load(args: argparse.Namespace) -> Dataset:
    d = load_csv(
        args.input,
        has_header=args.has_header,
        label_column=parse_label_column(args.label_col),
        missing_token=args.missing_token,
        name=os.path.splitext(os.path.basename(args.input))[0]
    )
    validate(d)
    return d


def _fixed(value: float) -> str:
    return format_fixed(value, config.MATRIX_DECIMALS)


def render_matrix(dm: DissimilarityMatrix, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"provenance": dm.provenance, "n": dm.n, "values": dm.values.tolist()}) + "\n"
    return "".join(csv_line(_fixed(v) for v in row) + "\n" for row in dm.values)


def render_forest(tree: SpanningTree, forest: Forest, fmt: str) -> str:
    if fmt == "json":
        edge = lambda e: {"u": e.u + 1, "v": e.v + 1, "weight": e.weight}  # noqa: E731
        return json.dumps({
            "n": tree.n,
            "k": len(forest.components),
            "tree": [edge(e) for e in tree.edges],
            "pruned": [edge(e) for e in forest.pruned],
            "components": [[i + 1 for i in part] for part in forest.components],
        }) + "\n"
    lines = ["# tree"]
    lines += [f"{e.u + 1} {e.v + 1} {_fixed(e.weight)}" for e in tree.edges]
    lines.append("# pruned")
    lines += [f"{e.u + 1} {e.v + 1} {_fixed(e.weight)}" for e in forest.pruned]
    lines.append("# components")
    lines += [" ".join(str(i + 1) for i in part) for part in forest.components]
    return "\n".join(lines) + "\n"


def render_centroids(c: Centroids, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"method": c.method, "seed": c.seed, "centroids": c.points.tolist()}) + "\n"
    return "".join(csv_line(_fixed(v) for v in row) + "\n" for row in c.points)


def render_cluster_sections(result: ClusteringResult) -> dict[str, str]:
    """CSV artifacts of a clustering run keyed by file name."""
    assignments = "object,cluster\n" + "".join(
        f"{i + 1},{int(a) + 1}\n" for i, a in enumerate(result.assignments)
    )
    trace = "iteration,sse\n" + "".join(
        f"{t + 1},{_fixed(value)}\n" for t, value in enumerate(result.sse_trace)
    )
    return {
        "assignments.csv": assignments,
        "centroids.csv": render_centroids(result.centroids, "csv"),
        "sse_trace.csv": trace,
    }


def render_cluster_json(result: ClusteringResult) -> str:
    return json.dumps({
        "k": result.centroids.k,
        "method": result.centroids.method,
        "seed": result.centroids.seed,
        "iterations": result.iterations,
        "converged": result.converged,
        "assignments": [int(a) + 1 for a in result.assignments],
        "centroids": result.centroids.points.tolist(),
        "sse_trace": list(result.sse_trace),
    }) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        write_text_atomic(output, text)
    else:
        sys.stdout.write(text)


def _cmd_dissim(args: argparse.Namespace) -> None:
    d = _load(args)
    cfg = _seed_config(args)
    ranges = feature_ranges(d, cfg.range_overrides)
    if args.feature is not None:
        if not 1 <= args.feature <= d.m:
            raise UsageError(f"--feature must be between 1 and {d.m}, got {args.feature}")
        dm = feature_matrix(d, args.feature - 1, ranges, cfg.zero_zero_skip)
    else:
        dm = combined_matrix(d, ranges, cfg.combine_mode, cfg.zero_zero_skip)
    _emit(render_matrix(dm, args.format), args.output)


def _cmd_mst(args: argparse.Namespace) -> None:
    d = _load(args)
    cfg = _seed_config(args)
    if args.k > d.n:
        raise UsageError(f"k={args.k} exceeds the number of objects ({d.n})")
    ranges = feature_ranges(d, cfg.range_overrides)
    tree = build_mst(combined_matrix(d, ranges, cfg.combine_mode, cfg.zero_zero_skip))
    forest = prune_heaviest(tree, args.k)
    _emit(render_forest(tree, forest, args.format), args.output)


def _cmd_seed(args: argparse.Namespace) -> None:
    d = _load(args)
    centroids = seed_centroids(d, args.k, args.init, args.seed, _seed_config(args))
    _emit(render_centroids(centroids, args.format), args.output)


def _cmd_cluster(args: argparse.Namespace) -> None:
    lloyd_config = LloydConfig(max_iterations=args.max_iter, centroid_tolerance=args.tol)
    seed_config = _seed_config(args)
    d = _load(args)
    result = cluster(d, args.k, args.init, args.seed, seed_config, lloyd_config)

    if args.format == "json":
        _emit(render_cluster_json(result), args.output)
        return
    sections = render_cluster_sections(result)
    if args.output:
        for file_name, text in sections.items():
            write_text_atomic(os.path.join(args.output, file_name), text)
    else:
        for file_name, text in sections.items():
            sys.stdout.write(f"# {os.path.splitext(file_name)[0]}\n{text}")


def _cmd_bench(args: argparse.Namespace) -> None:
    if args.label_col is None:
        raise UsageError("bench requires --label-col")
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    lloyd_config = LloydConfig(max_iterations=args.max_iter, centroid_tolerance=args.tol)
    seed_config = _seed_config(args)
    db_path = args.db or env_str("DTREE_DB_PATH")
    if db_path:
        init_db(db_path)
    d = _load(args)

    report = benchmark(
        d, args.k, methods=methods, runs=args.runs, base_seed=args.seed,
        seed_config=seed_config, lloyd_config=lloyd_config, metric=args.metric
    )
    include_timing = not args.no_timing
    if args.format == "json":
        text = report_to_json(report, include_timing)
    else:
        text = summary_frame(report, include_timing).to_csv(index=False, lineterminator="\n")

    if db_path:
        written = insert_report(report, db_path)
        logger.info(f"Stored {written} run records in {db_path}")
    _emit(text, args.output)


def _cmd_history(args: argparse.Namespace) -> None:
    db_path = args.db or env_str("DTREE_DB_PATH", config.DEFAULT_DB_PATH)
    if not os.path.isfile(db_path):
        raise DataError(f"no run history at {db_path}")
    if args.limit < 1:
        raise UsageError(f"--limit must be >= 1, got {args.limit}")

    if args.dataset is not None:
        rows = get_method_summary(args.dataset, db_path)
        columns = list(HISTORY_SUMMARY_COLUMNS)
    else:
        rows = get_recent_runs(args.limit, db_path)
        columns = list(HISTORY_RUN_COLUMNS)
    logger.info(f"Read {len(rows)} history rows from {db_path}")

    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        text = pd.DataFrame(rows, columns=columns).to_csv(index=False, lineterminator="\n")
    _emit(text, args.output)


def _cmd_export(args: argparse.Namespace) -> None:
    _emit(to_csv_text(load_bundled(args.name)), args.output)


COMMANDS = {
    "dissim": _cmd_dissim,
    "mst": _cmd_mst,
    "seed": _cmd_seed,
    "cluster": _cmd_cluster,
    "bench": _cmd_bench,
    "history": _cmd_history,
    "export": _cmd_export,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one subcommand and return the process exit status."""
    load_env()
    try:
        args = build_parser().parse_args(list(sys.argv[1:] if argv is None else argv))
        level = "INFO" if args.verbose else env_str("DTREE_LOG_LEVEL", config.LOG_LEVEL)
        log_file = env_str("DTREE_LOG_FILE")
        setup_logging(
            level=level,
            log_to_file=config.LOG_TO_FILE or log_file is not None,
            log_file_name=log_file or config.LOG_FILE_NAME
        )
        COMMANDS[args.command](args)
    except ClusteringError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return config.EXIT_DATA
    except Exception as e:
        logger.exception("Unexpected failure")
        print(f"error: internal failure: {e}", file=sys.stderr)
        return config.EXIT_INVARIANT
    return config.EXIT_OK
