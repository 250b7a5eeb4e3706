"""Desk-scale laboratory for coned-off hyperbolic graphs and complexes of groups."""

__version__ = "0.1.0"
