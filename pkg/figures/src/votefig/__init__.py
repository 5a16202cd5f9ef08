"""Figure rendering for the election engine's CSV outputs."""

from .render import (FIGURE_KINDS, FigureSpec, RenderResult, SchemaError,
                     render)

__version__ = "0.1.0"
