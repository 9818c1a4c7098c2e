"""Render overlay figures from exported DoF region JSON documents."""

from regionplot.figures import (
    FigureLayer,
    FigureSpec,
    RegionDocument,
    SchemaError,
    contains_point,
    figure_spec,
    load_document,
    polygon_ring,
    render,
    render_figure,
    signed_area,
)

__all__ = [
    "FigureLayer",
    "FigureSpec",
    "RegionDocument",
    "SchemaError",
    "contains_point",
    "figure_spec",
    "load_document",
    "polygon_ring",
    "render",
    "render_figure",
    "signed_area",
]
