"""Rarita-Schwinger type operators on R^n, S^n and RP^n: exact Clifford
algebra, monogenic spaces, kernels, and numerical verification of the
integral theorems."""

__version__ = "0.1.0"
