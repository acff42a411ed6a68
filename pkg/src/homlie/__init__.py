"""Exact tools for Hom-Lie algebras, their modules, and twisted sl(2) families."""

__version__ = "0.1.0"
