"""Exact reconstruction and Galois-theoretic checks of a degree-40 PSp4(3)-polynomial."""

__version__ = "0.1.0"
