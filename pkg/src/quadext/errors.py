from __future__ import annotations


class VerificationError(ValueError):
    """A defining identity failed. ``witness`` names the offending basis indices."""

    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message} (witness {witness})")
        self.witness = witness


class InputError(ValueError):
    """Malformed input: wrong shapes, missing fields, unparsable scalars."""


class InternalConsistencyError(RuntimeError):
    """Two independent computations that must agree did not."""


class PreconditionError(ValueError):
    """Operation called on an object of the wrong kind (e.g. wrong kernel class)."""
