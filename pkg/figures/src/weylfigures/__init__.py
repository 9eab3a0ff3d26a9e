"""Static-figure rendering for torusweyl CSV outputs."""

__version__ = "0.1.0"

from .render import FigureJob, SchemaError, dump_plotted, render
