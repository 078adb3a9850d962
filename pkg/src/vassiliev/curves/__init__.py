"""Parametrized links, projections and Gauss-kernel integrals."""

from .geometry import (
    CurveError,
    FourierCurve,
    GeomTolerance,
    ParamCurve,
    ParamLink,
    PolylineCurve,
    evaluate,
)
from .io import link_from_dict, load_link, save_link
from .library import BUILTIN_NAMES, builtin_link, builtin_links
from .projection import NonRegularDirection, find_crossings, frame, project, random_directions
from .quadrature import (
    QuadResult,
    adaptive_square,
    gauss_kernel,
    gauss_linking_integral,
    self_linking_integral,
)
from .writhe import direction_average, polygon_writhe

__all__ = [
    "CurveError",
    "FourierCurve",
    "GeomTolerance",
    "ParamCurve",
    "ParamLink",
    "PolylineCurve",
    "evaluate",
    "link_from_dict",
    "load_link",
    "save_link",
    "BUILTIN_NAMES",
    "builtin_link",
    "builtin_links",
    "NonRegularDirection",
    "find_crossings",
    "frame",
    "project",
    "random_directions",
    "QuadResult",
    "adaptive_square",
    "gauss_kernel",
    "gauss_linking_integral",
    "self_linking_integral",
    "direction_average",
    "polygon_writhe",
]
