"""Finite categories, presheaves, presented theories and their models."""

__version__ = "0.1.0"
