"""Finite-field tools for transversal-CCZ quantum codes."""

__version__ = "0.1.0"
