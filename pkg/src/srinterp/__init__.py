"""Stochastic subscript rounding for image interpolation and scan conversion."""

__version__ = "0.1.0"
