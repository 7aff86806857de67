"""Exception hierarchy with stable CLI exit codes.

Exit-code contract: 0 success, 2 input error, 3 computation limit (size
guards), 4 internal invariant failure.
"""

from __future__ import annotations


class FeynmintError(Exception):
    """Base class for all package errors."""

    exit_code = 4
    code = "internal"


class InputError(FeynmintError):
    """Malformed or inconsistent user-supplied data."""

    exit_code = 2
    code = "input"


class LimitError(FeynmintError):
    """A size guard refused the computation."""

    exit_code = 3
    code = "limit"


class InternalError(FeynmintError):
    """An internal invariant was violated."""

    exit_code = 4
    code = "internal"


class ContextMismatchError(InternalError):
    """Operands built over different variable contexts were combined."""
