"""Exact wall-crossing combinatorics for marked del Pezzo surfaces of degrees 3 and 4."""

__version__ = "0.1.0"
