"""
Configuration module for dissimilarity-tree K-means.
All pipeline defaults can be modified here without touching the logic.
"""

DEFAULT_COMBINE_MODE: str = "mean"
ZERO_ZERO_SKIP: bool = True

DEFAULT_MISSING_TOKEN: str = ""
CSV_DELIMITER: str = ","

DEFAULT_INIT_METHOD: str = "tree"
DEFAULT_SEED: int = 0

MAX_ITERATIONS: int = 100
CENTROID_TOLERANCE: float = 0.0
EMPTY_CLUSTER_POLICY: str = "reassign_farthest"

BENCHMARK_RUNS: int = 10
BENCHMARK_METHODS: list[str] = ["random", "tree"]
BENCHMARK_METRIC: str = "purity"

MATRIX_DECIMALS: int = 6
RUNTIME_DECIMALS: int = 4
ACCURACY_DECIMALS: int = 1

LOG_LEVEL: str = "WARNING"
LOG_TO_FILE: bool = False
LOG_FILE_NAME: str = "dtree_kmeans.log"

DEFAULT_DB_PATH: str = "benchmarks.db"
HISTORY_LIMIT: int = 20

BUNDLED_DATASETS: list[str] = ["iris", "wine"]

EXIT_OK: int = 0
EXIT_USAGE: int = 1
EXIT_DATA: int = 2
EXIT_INVARIANT: int = 3
