"""Exact order-pattern analysis for interval maps, shift systems and series."""
__version__ = "0.1.0"
