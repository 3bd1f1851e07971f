"""Finite groupoid models of univalent fibrations and complete Segal objects."""

__version__ = "0.1.0"
