"""Shared exception types.

Three failure categories are kept apart so callers (and the command line
layer) can map them to distinct exit codes:

* ``ParameterError``: the request itself is malformed (bad field order,
  non-irreducible modulus, degree out of range, ...).
* ``ResourceCapError``: the request is well formed but would exceed an
  explicit enumeration cap.  Raised before any heavy work starts.
* ``ContractError``: an internal consistency guarantee failed, or a caller
  asked for a quantity whose hypotheses are not established.  Seeing one of
  these means either a bug or a misuse that would silently produce wrong
  numbers if allowed through.
"""


class QvintError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(QvintError, ValueError):
    """Invalid user-supplied parameters."""


class ResourceCapError(QvintError, RuntimeError):
    """An enumeration or allocation would exceed its configured cap."""


class ContractError(QvintError, RuntimeError):
    """An internal invariant or stated hypothesis does not hold."""
