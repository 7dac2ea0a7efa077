"""Exact computations for HLRV functions and cell decompositions of character varieties."""

__version__ = "0.1.0"
