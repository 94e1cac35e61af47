"""Invariants of the compactified kappa-Minkowski algebras U_a = C*(B_a x| Z)."""

__version__ = "0.1.0"

from .errors import (
    ContextMismatch,
    ConvergenceError,
    GuardExceeded,
    InvalidParameter,
    KappaSolenoidError,
    ReducibleError,
)
from .exactalg import Algebraic, IntPolynomial, Transcendental, normalize_poly

__all__ = [
    "__version__",
    "Algebraic",
    "ContextMismatch",
    "ConvergenceError",
    "GuardExceeded",
    "IntPolynomial",
    "InvalidParameter",
    "KappaSolenoidError",
    "ReducibleError",
    "Transcendental",
    "normalize_poly",
]
