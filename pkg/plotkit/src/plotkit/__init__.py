"""plotkit: offline figure regeneration from ampfsi CSV artifacts."""

from .render import ColumnError, FigureSpec, load_csv, render

__version__ = "0.1.0"
