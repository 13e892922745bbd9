"""Corpus-to-bundle exporter for the refless scorer."""

__version__ = "0.1.0"
