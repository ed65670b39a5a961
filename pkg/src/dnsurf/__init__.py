"""dnsurf: double-number toolkit for minimal time-like surfaces."""

from .canon import CanonicalChart, ChartRelation, Map1D, canonize, isotropic_chart, relate_charts, verify_canonical
from .dnum import DClass, DNum, classify, exp_j, format_dnum, nth_root_positive, parse_dnum
from .errors import DnsurfError
from .family import Motion, apply_motion, associated_surface, conjugate_surface, homothety, transport_chart
from .geom import (
    NormalHyperbola,
    PointClass,
    PointData,
    SurfacePatch,
    classify_point,
    gauss_K,
    grid_quantities,
    hyperbola_at,
    hyperbola_sample,
    make_surface,
    mean_curvature_residual,
    point_data,
    project_normal,
    second_fundamental,
)
from .holo import Box, HoloCurve, HoloMap, RealFn1, cr_residual
from .mink import DVec, dot, normsq, wedge_normsq
from .sexpr import diff_t, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "Box", "CanonicalChart", "ChartRelation", "DClass", "DNum", "DVec",
    "DnsurfError", "HoloCurve", "HoloMap", "Map1D", "Motion",
    "NormalHyperbola", "PointClass", "PointData", "RealFn1", "SurfacePatch",
    "apply_motion", "associated_surface", "canonize", "classify",
    "classify_point", "conjugate_surface", "cr_residual", "diff_t", "dot",
    "exp_j", "format_dnum", "gauss_K", "grid_quantities", "homothety",
    "hyperbola_at", "hyperbola_sample", "isotropic_chart", "make_surface",
    "mean_curvature_residual", "normsq", "nth_root_positive", "parse",
    "parse_dnum", "point_data", "project_normal", "relate_charts",
    "second_fundamental", "serialize", "transport_chart",
    "verify_canonical", "wedge_normsq",
]
