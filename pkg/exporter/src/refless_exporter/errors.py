"""Exporter exception type."""


class ExporterError(Exception):
    """Corpus, encoder, or output problems surfaced as CLI diagnostics."""
