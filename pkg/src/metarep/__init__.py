"""Metabelian SL(n, C) representations of knot groups."""

__version__ = "0.1.0"

from .errors import INFINITE, MetarepError, is_infinite
from .knotio import KnotPresentation, Word, knot_from_spec, parse_braid, parse_pd, torus_knot, unknot
from .alexmod import alexander_poly, branched_homology, sw_ratio
from .metab import build_rep, count_classes, metabelian_reps, orbit_representatives, rn_lower_bound
from .representation import Representation

__all__ = [
    "INFINITE",
    "KnotPresentation",
    "MetarepError",
    "Representation",
    "Word",
    "alexander_poly",
    "branched_homology",
    "build_rep",
    "count_classes",
    "is_infinite",
    "knot_from_spec",
    "metabelian_reps",
    "orbit_representatives",
    "parse_braid",
    "parse_pd",
    "rn_lower_bound",
    "sw_ratio",
    "torus_knot",
    "unknot",
]
