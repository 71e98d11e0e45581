"""Ordered theta-graph spanners: construction, stretch measurement, bounds,
and adversarial instance generators."""

from .bounds import Family, classify, lower_bound, upper_bound
from .construction import SpannerGraph, build_ordered, build_unordered
from .geometry import ConeSystem, Point
from .metrics import all_pairs_stretch, stretch_oracle

__version__ = "0.1.0"

__all__ = [
    "ConeSystem",
    "Family",
    "Point",
    "SpannerGraph",
    "all_pairs_stretch",
    "build_ordered",
    "build_unordered",
    "classify",
    "lower_bound",
    "stretch_oracle",
    "upper_bound",
]
