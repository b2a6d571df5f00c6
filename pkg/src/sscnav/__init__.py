"""Semantic scene completion and object-goal navigation on procedural 2-D houses."""

__version__ = "0.1.0"
