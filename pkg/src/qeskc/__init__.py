"""Quasi-exactly solvable extensions of the Kepler-Coulomb potential on the sphere."""

__version__ = "0.1.0"
