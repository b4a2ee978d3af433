"""Exact computation of X-variables of finite-type cluster algebras and their geometric models."""

from __future__ import annotations

from .poly import Polynomial, poly_gcd
from .semifield import (
    FactorBasis,
    RationalFunction,
    SemifieldError,
    Trivial,
    Tropical,
    Universal,
    rf_canonicalize,
    sf_inv,
    sf_mul,
    sf_oplus,
)

__all__ = [
    "Polynomial",
    "poly_gcd",
    "FactorBasis",
    "RationalFunction",
    "SemifieldError",
    "Trivial",
    "Tropical",
    "Universal",
    "rf_canonicalize",
    "sf_inv",
    "sf_mul",
    "sf_oplus",
]
