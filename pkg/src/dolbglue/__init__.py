"""Boundary-operator calculus and determinant gluing on model Riemann surfaces."""

__version__ = "0.1.0"
