"""Shared exception types.

The error contract distinguishes caller mistakes (ConfigError, BasisMismatchError,
plain ValueError) from resource-cap hits (BraidOverflowError, OutOfBallError) and
from mathematical identities failing to hold in computed data
(InvariantViolationError) - the last should never fire and indicates a bug or a
genuinely false statement.
"""


class ConfigError(ValueError):
    """Malformed or inconsistent Coxeter system configuration."""


class BasisMismatchError(ValueError):
    """Operation received algebra elements expressed in incompatible bases."""


class BraidOverflowError(RuntimeError):
    """A braid-equivalence class exceeded the configured enumeration cap."""


class OutOfBallError(RuntimeError):
    """A quotient rewriting chain left the configured search ball."""


class InvariantViolationError(RuntimeError):
    """A mathematical invariant failed on concrete data (triangularity, bar
    antisymmetry, linear independence of module generators, ...)."""
