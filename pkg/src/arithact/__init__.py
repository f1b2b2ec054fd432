"""Exact computations for orders, bounded generation, amenability and circle actions."""

__version__ = "0.1.0"
