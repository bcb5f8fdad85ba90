"""Mal'cev-Neumann series over finite coefficient rings, with exhaustive checkers."""

__version__ = "0.1.0"
