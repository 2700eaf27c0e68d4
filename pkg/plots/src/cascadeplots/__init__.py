"""Chart rendering for cascade experiment CSV files.

Renders static figures from the CSV files the cascadescope CLI emits.
This package never runs simulations and never imports the simulator;
the CSV formats are the entire interface between the two.
"""

from .jobs import HEADERS, CsvFormatError, PlotJob, load_table
from .render import render

__all__ = ["HEADERS", "CsvFormatError", "PlotJob", "load_table", "render"]
