"""Figure rendering for the N-scheme STIRAP simulator's CSV outputs."""

from .figures import FIGURES, FigureSpec, render
from .reader import InputError, Table, read_table

__all__ = ["FIGURES", "FigureSpec", "render", "InputError", "Table",
           "read_table"]
__version__ = "0.1.0"
