"""Numerical checks for strongly operator convex functions on Hermitian matrices."""

__version__ = "0.1.0"
