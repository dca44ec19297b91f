"""
Exception hierarchy shared by every module.
The CLI maps each class to a process exit status.
"""

import config


class ClusteringError(Exception):
    """Base class for all errors raised by the library."""

    exit_code: int = config.EXIT_DATA


class UsageError(ClusteringError):
    """Invalid option, flag or parameter value."""

    exit_code = config.EXIT_USAGE


class DataError(ClusteringError):
    """Input data cannot be read or violates a domain precondition."""

    exit_code = config.EXIT_DATA


class InvariantError(ClusteringError):
    """An internal consistency audit failed."""

    exit_code = config.EXIT_INVARIANT
