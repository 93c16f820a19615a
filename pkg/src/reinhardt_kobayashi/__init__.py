"""Certified Kobayashi distance bounds in pseudoconvex Reinhardt domains."""

__version__ = "0.1.0"
