"""Figure rendering for gausspid records CSVs."""

__version__ = "0.1.0"

from .render import (
    FigureInputError,
    FigureSpec,
    data_to_pixels,
    load_records,
    project_2d,
    render,
    simplex_points_3d,
)

__all__ = [
    "FigureInputError",
    "FigureSpec",
    "data_to_pixels",
    "load_records",
    "project_2d",
    "render",
    "simplex_points_3d",
]
