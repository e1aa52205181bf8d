"""Koebe (midscribed) realizations of 3-polytopes and their 4-direction illumination."""

from sphillum.koebe.graph import PolyhedralGraph, graph_of
from sphillum.koebe.mobius import CircleOnSphere, MobiusMap, center_points, inversive, stereo_lift
from sphillum.koebe.packing import PlanarPattern, layout, solve_radii
from sphillum.koebe.pipeline import KoebeResult, koebe_pipeline
from sphillum.koebe.realization import (
    KoebeRealization,
    choose_face,
    choose_normalization_point,
    diagonal_intersection,
    four_directions,
    four_directions_verified,
    midscribe,
    poincare_normalize,
    relint_distances,
)

__all__ = [
    "CircleOnSphere",
    "KoebeRealization",
    "KoebeResult",
    "MobiusMap",
    "PlanarPattern",
    "PolyhedralGraph",
    "center_points",
    "choose_face",
    "choose_normalization_point",
    "diagonal_intersection",
    "four_directions",
    "four_directions_verified",
    "graph_of",
    "inversive",
    "koebe_pipeline",
    "layout",
    "midscribe",
    "poincare_normalize",
    "relint_distances",
    "solve_radii",
    "stereo_lift",
]
