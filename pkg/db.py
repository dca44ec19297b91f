"""
Database module for storing benchmark run records in SQLite.
"""

import sqlite3
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Iterator

import config
from errors import DataError
from evaluation import EvaluationReport

DEFAULT_DB_PATH = config.DEFAULT_DB_PATH


@contextmanager
def _connect(db_path: str, row_factory: bool = False) -> Iterator[sqlite3.Connection]:
    """Open db_path, commit on success and close; SQLite failures become DataError."""
    try:
        conn = sqlite3.connect(db_path)
    except sqlite3.Error as e:
        raise DataError(f"cannot open database {db_path}: {e}") from e
    if row_factory:
        conn.row_factory = sqlite3.Row
    try:
        yield conn
        conn.commit()
    except sqlite3.Error as e:
        raise DataError(f"database {db_path}: {e}") from e
    finally:
        conn.close()


def init_db(db_path: str = DEFAULT_DB_PATH) -> None:
    """Initialize the database and create tables if they don't exist."""
    with _connect(db_path) as conn:
        cursor = conn.cursor()

        cursor.execute('''
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                timestamp TEXT NOT NULL,
                dataset TEXT NOT NULL,
                k INTEGER NOT NULL,
                metric TEXT NOT NULL,
                method TEXT NOT NULL,
                run INTEGER NOT NULL,
                seed TEXT,
                accuracy REAL NOT NULL,
                runtime REAL NOT NULL,
                iterations INTEGER NOT NULL,
                sse REAL NOT NULL,
                converged INTEGER NOT NULL
            )
        ''')

        cursor.execute('''
            CREATE INDEX IF NOT EXISTS idx_runs_dataset
            ON runs(dataset, k, method)
        ''')


def insert_report(report: EvaluationReport, db_path: str = DEFAULT_DB_PATH) -> int:
    """Insert one row per run of the report; returns the number of rows written."""
    init_db(db_path)

    now = datetime.now(timezone.utc).isoformat()
    rows = [
        (
            now, report.dataset, report.k, report.metric, record.method, run.run + 1,
            None if run.seed is None else str(run.seed),
            run.accuracy, run.runtime, run.iterations, run.sse, int(run.converged)
        )
        for record in report.methods
        for run in record.runs
    ]
    with _connect(db_path) as conn:
        cursor = conn.cursor()
        cursor.executemany('''
            INSERT INTO runs (
                timestamp, dataset, k, metric, method, run, seed,
                accuracy, runtime, iterations, sse, converged
            ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
        ''', rows)
    return len(rows)


def get_recent_runs(limit: int = 100, db_path: str = DEFAULT_DB_PATH) -> list:
    """Get the most recent run records."""
    init_db(db_path)
    with _connect(db_path, row_factory=True) as conn:
        cursor = conn.cursor()
        cursor.execute('''
            SELECT * FROM runs
            ORDER BY id DESC
            LIMIT ?
        ''', (limit,))
        return [dict(row) for row in cursor.fetchall()]


def get_method_summary(dataset: str, db_path: str = DEFAULT_DB_PATH) -> list:
    """Mean accuracy, runtime and iterations per (k, method) over all stored runs of a dataset."""
    init_db(db_path)
    with _connect(db_path, row_factory=True) as conn:
        cursor = conn.cursor()
        cursor.execute('''
            SELECT
                k,
                method,
                COUNT(*) as run_count,
                AVG(accuracy) as mean_accuracy,
                AVG(runtime) as mean_runtime,
                AVG(iterations) as mean_iterations
            FROM runs
            WHERE dataset = ?
            GROUP BY k, method
            ORDER BY k ASC, method ASC
        ''', (dataset,))
        return [dict(row) for row in cursor.fetchall()]
