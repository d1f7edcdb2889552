"""Exact computations with quadratic Lie algebras and their central extensions."""
from __future__ import annotations

from .errors import InputError, InternalConsistencyError, PreconditionError, VerificationError
from .exactlin import Mat, Subspace
from .liealg import LieAlgebra, QuadraticLieAlgebra, verify_quadratic

__all__ = [
    "InputError",
    "InternalConsistencyError",
    "LieAlgebra",
    "Mat",
    "PreconditionError",
    "QuadraticLieAlgebra",
    "Subspace",
    "VerificationError",
    "verify_quadratic",
]
__version__ = "0.1.0"
