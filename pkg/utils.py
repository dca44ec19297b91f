"""
Utility functions for dissimilarity-tree K-means.

Example .env file structure:
----------------------------
DTREE_LOG_LEVEL=INFO
DTREE_LOG_FILE=dtree_kmeans.log
DTREE_DB_PATH=benchmarks.db
----------------------------
"""

import os
import tempfile
from typing import Iterable, Optional

from dotenv import load_dotenv

from logger import get_logger

logger = get_logger(__name__)


def load_env() -> None:
    """Load environment variables from .env file."""
    load_dotenv()


def env_str(name: str, default: Optional[str] = None) -> Optional[str]:
    """Return a non-empty environment variable or the default."""
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    return value.strip()


def format_fixed(value: float, decimals: int) -> str:
    """Format a real number in fixed point with the given number of decimals."""
    text = f"{value:.{decimals}f}"
    if text.startswith("-") and float(text) == 0.0:
        return text[1:]
    return text


def format_percent(fraction: float, decimals: int = 1) -> str:
    """Format a fraction in [0, 1] as a percentage without the sign."""
    return format_fixed(fraction * 100.0, decimals)


def csv_line(values: Iterable[object]) -> str:
    """Join already formatted cells into one comma-separated line."""
    return ",".join(str(v) for v in values)


def write_text_atomic(path: str, text: str) -> None:
    """
    Write text to path through a temporary file in the same directory.
    The target either receives the full content or is left untouched.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except Exception:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.debug(f"Wrote {len(text)} characters to {path}")
