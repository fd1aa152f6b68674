"""Exact computations for refined BPS invariants and cohomological Hall algebras of quivers with potential."""

__version__ = "0.1.0"
