"""Exact computation of U_7 slopes on overconvergent forms of level 49."""

__version__ = "0.1.0"
