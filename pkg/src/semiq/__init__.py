"""Exact computations with multilinear semi-invariants of matrix tuples."""

__version__ = "0.1.0"
