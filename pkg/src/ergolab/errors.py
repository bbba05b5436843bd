"""Exception types shared across the package.

The CLI maps these onto its exit-status contract: config/window problems
exit 2, budget problems exit 3.
"""


class ErgolabError(Exception):
    """Base class for all package errors."""


class ConfigError(ErgolabError):
    """Invalid configuration or argument; message carries the field path."""


class WindowError(ErgolabError):
    """A sequence window does not cover the index range an operation needs."""


class BudgetError(ErgolabError):
    """An operation would exceed the elementary-product budget."""


class ExactRangeError(ErgolabError):
    """An integer iterate left the range where evaluation is kept exact."""
