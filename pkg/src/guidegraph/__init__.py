"""Clinical-guideline flowchart PDFs to an enriched knowledge graph."""

__version__ = "0.1.0"
