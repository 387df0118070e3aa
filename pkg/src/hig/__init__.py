"""Exact algebra of unitarily invariant valuations and curvature measures on complex space forms."""

__version__ = "0.1.0"
