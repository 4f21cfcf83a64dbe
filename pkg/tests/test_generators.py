from collections import Counter

import networkx as nx
import pytest

from errors import BudgetExceeded, SphericalParameters, ValidationError
from generators import (DEFAULT_BUDGET, _TessellationPatch, generate_gpq, generate_tree, generate_trihex,
                        generate_truncation)
from growth import gpq_sphere_sizes, sphere_series
from planar_core import load_truncation, to_networkx


@pytest.mark.parametrize("p, q, radius", [(6, 6, 5), (5, 6, 5), (4, 6, 6), (6, 3, 7), (4, 4, 8), (3, 6, 8),
                                          (7, 3, 6), (5, 4, 5)])
def test_gpq_spheres_follow_the_recursion(p, q, radius):
    series = sphere_series(generate_gpq(p, q, radius))
    assert series.trusted_radius == radius
    assert list(series.sphere_sizes) == gpq_sphere_sizes(p, q, radius)


@pytest.mark.parametrize("p, q, radius", [(4, 5, 5), (3, 7, 7), (5, 5, 4)])
def test_gpq_without_integer_recursion_matches_bfs(p, q, radius):
    trunc = generate_gpq(p, q, radius)
    layers = nx.single_source_shortest_path_length(to_networkx(trunc.map), trunc.center)
    counts = Counter(layers.values())
    series = sphere_series(trunc)
    assert list(series.sphere_sizes) == [counts[n] for n in range(series.trusted_radius + 1)]
    assert series.monotone


@pytest.mark.parametrize("p, q, radius", [(6, 6, 4), (4, 5, 4), (3, 7, 6)])
def test_gpq_interior_is_regular(p, q, radius):
    trunc = generate_gpq(p, q, radius)
    assert trunc.is_interior(trunc.center)
    for v in trunc.interior_vertices:
        assert trunc.degree(v) == p
        assert trunc.corner_degrees(v) == (q,) * p


def test_ids_follow_distance_order(g66):
    distances = list(g66.center_distances)
    assert distances == sorted(distances)


@pytest.mark.parametrize("p, q", [pytest.param(6, 6, marks=pytest.mark.slow), (5, 6), (4, 6), (6, 3), (4, 4),
                                  (3, 6)])
def test_patch_spheres_to_radius_eight(p, q):
    dist = _TessellationPatch(p, q, DEFAULT_BUDGET).grow(8)
    counts = Counter(d for d in dist if d is not None and d <= 8)
    assert [counts[n] for n in range(9)] == gpq_sphere_sizes(p, q, 8)


@pytest.mark.parametrize("build, radius", [(lambda r: generate_gpq(6, 6, r), 3), (lambda r: generate_gpq(3, 7, r), 5),
                                           (lambda r: generate_gpq(5, 4, r), 3), (lambda r: generate_tree(3, r), 4),
                                           (generate_trihex, 4)])
def test_larger_radius_extends_the_ball(build, radius):
    small, large = build(radius), build(radius + 1)
    n = small.vertex_count
    assert [int(d) for d in large.center_distances[:n]] == [int(d) for d in small.center_distances]
    assert all(d > radius for d in large.center_distances[n:])
    for v in range(n):
        assert large.interior_flags[v] or not small.interior_flags[v]
        if small.center_distances[v] < radius:
            assert large.map.neighbors(v) == small.map.neighbors(v)
    assert len(large.interior_vertices) > len(small.interior_vertices)


@pytest.mark.parametrize("name, build", [("g66_r4.json", lambda: generate_gpq(6, 6, 4)),
                                         ("trihex_r6.json", lambda: generate_trihex(6))])
def test_shipped_fixtures_match_the_generators(fixtures_dir, name, build):
    shipped, generated = load_truncation(fixtures_dir / name), build()
    assert shipped.map.rotation == generated.map.rotation
    assert shipped.interior_flags == generated.interior_flags
    assert shipped.host.family == generated.host.family


def test_tree_spheres(t3):
    series = sphere_series(generate_tree(3, 4))
    assert list(series.sphere_sizes) == [1, 3, 6, 12, 24]
    assert all(t3.degree(v) == 3 for v in t3.interior_vertices)
    assert all(t3.face_degree(f) == float("inf") for f in range(len(t3.map.faces)))


def test_trihex_vertex_figure(trihex):
    assert trihex.interior_vertices
    for v in trihex.interior_vertices:
        degrees = trihex.corner_degrees(v)
        assert len(degrees) == 4
        assert sorted(degrees) == [3, 3, 6, 6]
        assert degrees[0] != degrees[1] and degrees[0] == degrees[2]


def _interior_hexagons(trunc):
    return [f for f in trunc.host_face_ids
            if len(trunc.map.faces[f]) == 6 and all(trunc.is_interior(v) for v in trunc.map.faces[f])]


def test_trihex_interior_hexagon_appears_at_radius_five():
    assert _interior_hexagons(generate_trihex(3)) == []
    assert _interior_hexagons(generate_trihex(4)) == []
    hexagons = _interior_hexagons(generate_trihex(5))
    assert hexagons
    trunc = generate_trihex(5)
    for f in hexagons:
        assert trunc.face_degree(f) == 6


def test_spherical_parameters_are_rejected():
    with pytest.raises(SphericalParameters):
        generate_gpq(3, 5, 2)
    assert SphericalParameters("x").exit_code == 2


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        generate_gpq(6, 6, 6, budget=1000)
    with pytest.raises(BudgetExceeded):
        generate_tree(3, 12, budget=1000)
    with pytest.raises(BudgetExceeded):
        generate_trihex(20, budget=100)


def test_generate_truncation_dispatch():
    assert generate_truncation("tree", 2, p=4).vertex_count == 1 + 4 + 12
    with pytest.raises(ValidationError):
        generate_truncation("gpq", 2, p=6)
    with pytest.raises(ValidationError):
        generate_truncation("cairo", 2)
