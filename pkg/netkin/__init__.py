"""Kinetic, moment and Keller-Segel chemotaxis models on networks of one-dimensional edges."""

__version__ = "0.1.0"
