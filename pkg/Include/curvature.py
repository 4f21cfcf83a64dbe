"""
curvature.py

Corner, vertex and subset curvature, the curvature constants a, b, c,
and the exact boundary identities for finite vertex sets.
"""

import math
from fractions import Fraction
from typing import Dict, Optional, Tuple

import logfire
from pydantic import BaseModel, ConfigDict

from errors import BoundaryVertex, NoInteriorVertices, QSmallerThanFaceDegree
from parsers import FaceDegree
from planar_core import SubsetStats, Truncation


def inverse_degree(degree: FaceDegree) -> Fraction:
    """1/|f| with the infinigon convention 1/inf = 0."""
    if math.isinf(degree):
        return Fraction(0)
    return Fraction(1, int(degree))


def boundary_factor(q: FaceDegree) -> Fraction:
    """2q/(q-2), read as 2 for q = inf."""
    if math.isinf(q):
        return Fraction(2)
    return Fraction(2 * int(q), int(q) - 2)


def corner_curvature(v_degree: int, f_degree: FaceDegree) -> Fraction:
    """kappa_C = 1/|v| + 1/|f| - 1/2, exact."""
    return Fraction(1, v_degree) + inverse_degree(f_degree) - Fraction(1, 2)


def vertex_curvature(trunc: Truncation, v: int) -> Fraction:
    """Sum of the corner curvatures at an interior vertex."""
    if not trunc.is_interior(v):
        raise BoundaryVertex(f"vertex {v} is not interior")
    degree = trunc.degree(v)
    return sum((corner_curvature(degree, f) for f in trunc.corner_degrees(v)), Fraction(0))


def face_regular_curvature(v_degree: int, q: int) -> Fraction:
    """kappa(v) = 1 - |v|(q-2)/(2q) for a vertex whose faces are all q-gons."""
    return 1 - Fraction(v_degree * (q - 2), 2 * q)


class CurvatureProfile(BaseModel):
    """
    Curvature data over the interior of a truncation.

    a = -sup kappa and c = -sup kappa(v)/|v| are present only when strictly positive;
    b = -inf kappa is always present.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    interior_count: int
    a: Optional[Fraction] = None
    b: Fraction
    c: Optional[Fraction] = None
    nonpositive_corner_curvature: bool
    nonpositive_vertex_curvature: bool
    max_face_degree: Optional[int] = None
    vertex_curvatures: Optional[Dict[int, Fraction]] = None
    corner_curvatures: Optional[Dict[int, Tuple[Fraction, ...]]] = None


def curvature_constants(trunc: Truncation, per_vertex: bool = False) -> CurvatureProfile:
    interior = trunc.interior_vertices
    if not interior:
        raise NoInteriorVertices("truncation has no interior vertex")

    curvatures: Dict[int, Fraction] = {}
    corners: Dict[int, Tuple[Fraction, ...]] = {}
    for v in interior:
        degree = trunc.degree(v)
        corners[v] = tuple(corner_curvature(degree, f) for f in trunc.corner_degrees(v))
        curvatures[v] = sum(corners[v], Fraction(0))

    sup_kappa = max(curvatures.values())
    sup_ratio = max(kappa / trunc.degree(v) for v, kappa in curvatures.items())
    face_degrees = [f for v in interior for f in trunc.corner_degrees(v) if not math.isinf(f)]

    profile = CurvatureProfile(
        interior_count=len(interior),
        a=-sup_kappa if sup_kappa < 0 else None,
        b=-min(curvatures.values()),
        c=-sup_ratio if sup_ratio < 0 else None,
        nonpositive_corner_curvature=all(k <= 0 for values in corners.values() for k in values),
        nonpositive_vertex_curvature=sup_kappa <= 0,
        max_face_degree=max(face_degrees) if face_degrees else None,
        vertex_curvatures=curvatures if per_vertex else None,
        corner_curvatures=corners if per_vertex else None,
    )
    logfire.info("Curvature profile", interior=len(interior), a=str(profile.a), b=str(profile.b), c=str(profile.c),
                 nonpositive_corners=profile.nonpositive_corner_curvature)
    return profile


def harm_identity_check(stats: SubsetStats) -> Fraction:
    """
    kappa(W) - [2 - C(W) - |dE W|/2 + sum over boundary faces of |f|^i_W / |f|].
    Always zero for a connected interior subset.
    """
    rhs = 2 - stats.non_host_faces - Fraction(stats.edge_boundary, 2) + stats.boundary_face_sum
    return stats.curvature - rhs


def boundary_lower_bound(stats: SubsetStats, q: FaceDegree) -> Fraction:
    """
    (2q/(q-2)) * (2 - C(W) - kappa(W)), a lower bound for |dE W| when every face near W has degree <= q.
    """
    if stats.max_face_degree is not None and not math.isinf(q) and q < stats.max_face_degree:
        raise QSmallerThanFaceDegree(f"q = {q} is below the face degree {stats.max_face_degree} found at W")
    return boundary_factor(q) * (2 - stats.non_host_faces - stats.curvature)
