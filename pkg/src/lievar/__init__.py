"""Exact computation of Lie algebra degeneration invariants and certificates."""

__version__ = "0.1.0"
