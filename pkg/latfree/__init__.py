"""Exact arithmetic toolkit for lattice-free convex sets."""

__version__ = "0.1.0"
