"""Numerical boundary geometry of Hadamard surfaces."""

__version__ = "0.1.0"
