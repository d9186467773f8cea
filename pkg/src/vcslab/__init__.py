"""Numerical audit lab for vector coherent state frames."""
__version__ = "0.1.0"
