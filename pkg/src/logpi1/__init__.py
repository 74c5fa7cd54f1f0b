"""Exact tools for 1-minimal models, bar constructions, truncated nilpotent
Lie algebras and the monodromy of semistable curves given by dual graphs."""

__version__ = "0.1.0"
