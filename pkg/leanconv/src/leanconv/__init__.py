"""Convolutional text baseline for political-leaning classification."""

__version__ = "0.1.0"
