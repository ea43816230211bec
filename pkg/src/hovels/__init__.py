"""Computable bordered hovels for groups with valued root data."""

__version__ = "0.1.0"
