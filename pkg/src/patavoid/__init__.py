"""Avoidance of binary formulas: occurrence search, backtracking enumeration,
morphic words and certification of uniform morphisms."""

__version__ = "0.1.0"
