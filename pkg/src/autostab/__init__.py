"""Automatic subsets of the integers: representation, classification and certificates."""

__version__ = "0.1.0"
