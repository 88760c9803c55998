"""Completed single-layer solver for closed slender fibers in Stokes flow."""

__version__ = "0.1.0"
