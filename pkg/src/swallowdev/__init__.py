"""Developable surfaces along frontals with swallowtail-type singularities."""

__version__ = "0.1.0"
