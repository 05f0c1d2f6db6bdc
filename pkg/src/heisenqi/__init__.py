"""Heisenberg-picture qubit networks and finite-dimensional quantum information tools."""

__version__ = "0.1.0"
