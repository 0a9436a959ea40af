"""Exact K-theoretic J-series of type-A flag manifolds and the q-difference Toda lattice."""

from qtoda.algebra import Field, RationalFunction, TermLimitExceeded, parse

__all__ = ["Field", "RationalFunction", "TermLimitExceeded", "parse"]
__version__ = "0.1.0"
