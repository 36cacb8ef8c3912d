"""Measurement incompatibility hierarchy toolkit."""

__version__ = "0.1.0"
