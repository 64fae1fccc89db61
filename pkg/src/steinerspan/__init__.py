"""Plane Steiner (1 + eps)-spanners for planar point sets with fat Delaunay triangulations."""

from .arrangement import PlanarGraph, planarize
from .geometry import GeometryError, Point, Segment, in_circumcircle, orient2d, segment_intersection
from .portals import ParameterError, PortalSet, place_portals
from .spanner import PRACTICAL, THEORY, PlanarSpanner, SpannerConfig, TooSharpError, build_spanner, derive_config
from .triangle_spanner import build_triangle_spanner
from .triangulation import InputError, Triangulation, build_delaunay, euclidean_mst, sharpest_angle
from .verify import check_plane, held_karp_euclidean, held_karp_metric, max_dilation, verify
from .wedges import ConvexPolygon, build_wedges, trace_path

__all__ = [
    "ConvexPolygon", "GeometryError", "InputError", "ParameterError", "PlanarGraph", "PlanarSpanner",
    "Point", "PortalSet", "PRACTICAL", "Segment", "SpannerConfig", "THEORY", "TooSharpError",
    "Triangulation", "build_delaunay", "build_spanner", "build_triangle_spanner", "build_wedges",
    "check_plane", "derive_config", "euclidean_mst", "held_karp_euclidean", "held_karp_metric",
    "in_circumcircle", "max_dilation", "orient2d", "place_portals", "planarize", "segment_intersection",
    "sharpest_angle", "trace_path", "verify",
]
