"""Exception hierarchy.

DataError and its subclasses map to CLI exit status 2; ConfigError to
exit status 1.
"""


class CpdpBenchError(Exception):
    """Base class for package errors."""


class ConfigError(CpdpBenchError):
    """Invalid experiment configuration or CLI usage."""


class DataError(CpdpBenchError):
    """Problem with input data files or dataset contents."""


class SchemaError(DataError):
    """Header/schema mismatch; message names the offending column(s)."""


class ParseError(DataError):
    """Unparseable cell; message carries row and column context."""


class EmptyDatasetError(DataError):
    """File contained a header but no data rows."""


class SingleClassError(DataError):
    """Training data contains only one class; the run is degenerate."""
