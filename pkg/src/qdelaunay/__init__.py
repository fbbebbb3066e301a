"""Delaunay decompositions, Voronoi duals and proximity graphs for arbitrary quadratic forms."""
from .qform import QuadraticForm, PointSet, evaluate, inner, classify_displacement
from .qform import is_spacelike_position, is_generic_position, InputError, PositionError, UnsupportedError
from .qball import QBall, CenterForm, circumball, contains, center_form, in_sphere_sign
from .delaunay import CellComplex, delaunay, full_decomposition, brute_force_delaunay, verify
from .voronoi import VoronoiCell, bisector, voronoi, inverse_voronoi
from .angles2d import (
    AngleSequence, minkowski_angle, degenerate_angle, interior_angles, edge_angle,
    angle_sequence, compare_fatness, enumerate_triangulations, spacelike_component, timelike_angle,
)
from .edgeweights import WeightedPlanarGraph, weights_from_delaunay, augment_to_sphere, validate_disk, validate_sphere
from .transforms import (
    GroupElement, DegenerationSplit, apply_affine, rescale, limit_harness, moebius_apply,
    lightcone_test, inside_via_projective_line, moebius_delaunay_check,
)
from .proximity import Graph, mst, rng, gabriel
from .interp import PolyFunction, interp_error, optimality_check, lipschitz_graph

__all__ = [
    "QuadraticForm", "PointSet", "evaluate", "inner", "classify_displacement",
    "is_spacelike_position", "is_generic_position", "InputError", "PositionError", "UnsupportedError",
    "QBall", "CenterForm", "circumball", "contains", "center_form", "in_sphere_sign",
    "CellComplex", "delaunay", "full_decomposition", "brute_force_delaunay", "verify",
    "VoronoiCell", "bisector", "voronoi", "inverse_voronoi",
    "AngleSequence", "minkowski_angle", "degenerate_angle", "interior_angles", "edge_angle",
    "angle_sequence", "compare_fatness", "enumerate_triangulations", "spacelike_component", "timelike_angle",
    "WeightedPlanarGraph", "weights_from_delaunay", "augment_to_sphere", "validate_disk", "validate_sphere",
    "GroupElement", "DegenerationSplit", "apply_affine", "rescale", "limit_harness", "moebius_apply",
    "lightcone_test", "inside_via_projective_line", "moebius_delaunay_check",
    "Graph", "mst", "rng", "gabriel",
    "PolyFunction", "interp_error", "optimality_check", "lipschitz_graph",
]
