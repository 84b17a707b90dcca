"""Exact McKay-correspondence computations for dihedral groups in GL(2)."""

__version__ = "0.1.0"
