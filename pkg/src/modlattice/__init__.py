"""Exact machinery for generation theorems of extremal even 2-modular lattices."""

__version__ = "0.1.0"
