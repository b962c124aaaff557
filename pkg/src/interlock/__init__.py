"""Topological interlocking blocks from deformed wallpaper fundamental domains."""

__version__ = "0.1.0"
