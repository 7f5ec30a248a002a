"""Particular integrals of quasi-exactly-solvable operators: exact verification toolkit."""

__version__ = "0.1.0"
