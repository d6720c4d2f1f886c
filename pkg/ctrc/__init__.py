"""Complexity analysis for conditional constructor term rewriting systems."""

__version__ = "0.1.0"
