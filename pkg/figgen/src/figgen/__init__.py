"""Figure generation over the benchmark records CSV and summary JSON."""

from .render import FIGURE_IDS, SchemaError, render

__all__ = ["FIGURE_IDS", "SchemaError", "render"]

__version__ = "0.1.0"
