"""Publication-style figures rendered from darkloc CSV outputs."""

__version__ = "0.1.0"

from .readers import SchemaError, read_dos, read_scaling, read_sweep, read_traces
from .render import render
from .spec import FigureSpec, FigureSpecError, load_style

__all__ = [
    "FigureSpec",
    "FigureSpecError",
    "SchemaError",
    "load_style",
    "read_dos",
    "read_scaling",
    "read_sweep",
    "read_traces",
    "render",
]
