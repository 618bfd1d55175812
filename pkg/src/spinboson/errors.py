"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2,
numerical failures exit 3, failed invariant checks exit 1.
"""


class ConfigError(ValueError):
    """Invalid configuration: bad file, bad schema, or bad parameter values."""


class StructureError(ValueError):
    """A matrix violates a structural constraint (block pattern, Hermiticity)."""


class NumericalError(RuntimeError):
    """A linear solve or factorization failed or produced non-finite values."""
