import math
from fractions import Fraction

import pytest

from curvature import (boundary_factor, boundary_lower_bound, corner_curvature, curvature_constants,
                       face_regular_curvature, harm_identity_check, vertex_curvature)
from errors import BoundaryVertex, NoInteriorVertices, QSmallerThanFaceDegree
from planar_core import enumerate_connected_subsets, load_truncation, subset_stats


def test_corner_curvature_is_exact():
    assert corner_curvature(6, 6) == Fraction(-1, 6)
    assert corner_curvature(3, math.inf) == Fraction(-1, 6)
    assert corner_curvature(3, 4) == Fraction(1, 12)
    assert boundary_factor(6) == 3
    assert boundary_factor(math.inf) == 2


@pytest.mark.parametrize("p, q", [(6, 6), (4, 5), (7, 3), (3, 7)])
def test_corner_sums_match_face_regular_formula(p, q):
    assert p * corner_curvature(p, q) == face_regular_curvature(p, q)


def test_g66_constants(g66):
    profile = curvature_constants(g66)
    assert (profile.a, profile.b, profile.c) == (Fraction(1), Fraction(1), Fraction(1, 6))
    assert profile.nonpositive_corner_curvature
    assert profile.max_face_degree == 6
    assert vertex_curvature(g66, g66.center) == -1


def test_tree_constants(t3):
    profile = curvature_constants(t3)
    assert (profile.a, profile.b, profile.c) == (Fraction(1, 2), Fraction(1, 2), Fraction(1, 6))
    assert profile.max_face_degree is None


def test_flat_host_has_no_a_or_c(trihex):
    profile = curvature_constants(trihex)
    assert profile.a is None and profile.c is None
    assert profile.b == 0
    assert profile.nonpositive_vertex_curvature
    assert not profile.nonpositive_corner_curvature


def test_finite_host_total_curvature(cube, octahedron, pyramid):
    for trunc in (cube, octahedron, pyramid):
        profile = curvature_constants(trunc, per_vertex=True)
        assert sum(profile.vertex_curvatures.values()) == 2
    cube_profile = curvature_constants(cube)
    assert cube_profile.a is None
    assert cube_profile.b == Fraction(-1, 4)


def test_per_vertex_profile(octahedron):
    profile = curvature_constants(octahedron, per_vertex=True)
    assert profile.vertex_curvatures[0] == Fraction(1, 3)
    assert profile.corner_curvatures[0] == (Fraction(1, 12),) * 4


@pytest.mark.parametrize("fixture", ["cube", "pyramid"])
def test_subset_identity_vanishes(request, fixture):
    trunc = request.getfixturevalue(fixture)
    for subset in enumerate_connected_subsets(trunc, 5):
        stats = subset_stats(trunc, subset)
        assert harm_identity_check(stats) == 0
        assert stats.edge_boundary >= boundary_lower_bound(stats, trunc.max_face_degree)


def test_subset_identities_on_infinite_hosts(request):
    checked, sizes = 0, set()
    for name in ("g66", "g37", "g44", "trihex", "t3"):
        trunc = request.getfixturevalue(name)
        q = trunc.host.face_degree_bound
        for root in trunc.interior_vertices[:5]:
            for count, subset in enumerate(enumerate_connected_subsets(trunc, 9, roots=[root])):
                if count >= 50:
                    break
                stats = subset_stats(trunc, subset)
                assert harm_identity_check(stats) == 0, (name, stats.vertices)
                assert stats.volume == 2 * stats.edge_count + stats.edge_boundary
                assert stats.edge_boundary >= boundary_lower_bound(stats, q), (name, stats.vertices)
                checked += 1
                sizes.add(stats.size)
    assert checked >= 1000
    assert max(sizes) == 9


def test_bound_needs_q_at_least_the_face_degree(g66):
    stats = subset_stats(g66, [g66.center])
    with pytest.raises(QSmallerThanFaceDegree):
        boundary_lower_bound(stats, 4)


def test_boundary_vertices_have_no_curvature(t3):
    leaf = t3.vertex_count - 1
    with pytest.raises(BoundaryVertex):
        vertex_curvature(t3, leaf)


def test_no_interior_vertices(fixture_doc):
    doc = fixture_doc("cube.json")
    doc["interior"] = []
    with pytest.raises(NoInteriorVertices):
        curvature_constants(load_truncation(doc))
