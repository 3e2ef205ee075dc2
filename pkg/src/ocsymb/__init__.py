"""Exact p-adic distribution modules, overconvergent modular symbols,
Up slope data, and p-adic L-functions, with an exact-rational classical
oracle for cross-checking."""

__version__ = "0.1.0"
