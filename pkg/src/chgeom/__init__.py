"""Numerical Kähler geometry of Cartan-Hartogs domains."""

__version__ = "0.1.0"
