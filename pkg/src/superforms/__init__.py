"""Exact computer algebra for differential, integral and virtual superforms."""

__version__ = "0.1.0"
