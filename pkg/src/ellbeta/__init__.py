"""Elliptic beta integrals and their basic hypergeometric limits."""
__version__ = "0.1.0"
