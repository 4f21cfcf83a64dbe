import copy
import itertools
import json
from fractions import Fraction

import networkx as nx
import pytest

from errors import (CapTooLargeForBudget, DisconnectedGraph, EdgeOnOneFace, InconsistentAdjacency, InputError,
                    InvalidCap, NonPlanarRotation, ParseError, SphericalParameters, SubsetDisconnected,
                    SubsetTouchesBoundary, TerminalVertex)
from planar_core import (HostDescriptor, build_from_rotation_system, cut_locus, dump_truncation,
                         embedding_is_planar, enumerate_connected_subsets, load_truncation,
                         parse_truncation_document, subset_stats, to_networkx, trace_faces)

CUBE_ROTATION = [[4, 1, 3], [5, 2, 0], [6, 3, 1], [7, 0, 2], [5, 0, 7], [6, 1, 4], [7, 2, 5], [4, 3, 6]]


def test_trace_faces_of_cube():
    walks, face_of = trace_faces(CUBE_ROTATION)
    assert len(walks) == 6
    assert all(len(walk) == 4 for walk in walks)
    assert len(face_of) == 24
    assert (0, 1, 2, 3) in walks


def test_trace_faces_without_edges_has_one_empty_face():
    walks, face_of = trace_faces([[]])
    assert walks == [()]
    assert face_of == {}


def test_faces_lie_to_the_left():
    planar_map = build_from_rotation_system(CUBE_ROTATION)
    for u, v in planar_map.edges():
        assert planar_map.face_of(u, v) != planar_map.face_of(v, u)
    assert planar_map.euler_characteristic() == 2
    assert embedding_is_planar(planar_map)


def test_single_edge_is_exempt_only_when_not_strict():
    planar_map = build_from_rotation_system([[1], [0]], strict=False)
    assert len(planar_map.faces) == 1
    with pytest.raises(TerminalVertex):
        build_from_rotation_system([[1], [0]])


def test_cycle_has_two_faces():
    planar_map = build_from_rotation_system([[1, 2], [2, 0], [0, 1]])
    assert sorted(len(walk) for walk in planar_map.faces) == [3, 3]


@pytest.mark.parametrize("rotation, error", [
    ([[0, 1], [0]], InconsistentAdjacency),
    ([[1, 1], [0]], InconsistentAdjacency),
    ([[1], []], InconsistentAdjacency),
    ([[1], [0], [3], [2]], DisconnectedGraph),
    ([[4, 3, 1], [5, 2, 0], [6, 3, 1], [7, 0, 2], [5, 0, 7], [6, 1, 4], [7, 2, 5], [4, 3, 6]], NonPlanarRotation),
])
def test_invalid_rotation_systems(rotation, error):
    with pytest.raises(error):
        build_from_rotation_system(rotation, strict=False)


def test_path_edge_lies_on_one_face():
    with pytest.raises(EdgeOnOneFace):
        build_from_rotation_system([[1], [0, 2], [1]], exempt=[0, 2])


def test_spherical_host_descriptor_is_rejected():
    with pytest.raises(SphericalParameters):
        HostDescriptor(family="gpq", p=3, q=5)


def test_load_fixtures(cube, octahedron, pyramid):
    assert cube.finite_host and octahedron.finite_host and pyramid.finite_host
    assert len(cube.interior_vertices) == 8
    assert len(cube.host_face_ids) == 6
    assert len(octahedron.host_face_ids) == 8
    assert sorted(pyramid.map.face_degree(f) for f in pyramid.host_face_ids) == [3, 3, 3, 3, 4]


def test_corrupted_fixture_is_a_parse_error(fixtures_dir):
    with pytest.raises(ParseError) as excinfo:
        load_truncation(fixtures_dir / "corrupted.json")
    assert isinstance(excinfo.value, InconsistentAdjacency)
    assert excinfo.value.exit_code == 2


def test_unreadable_files_are_parse_errors(tmp_path):
    with pytest.raises(ParseError):
        load_truncation(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        load_truncation(broken)
    with pytest.raises(ParseError):
        load_truncation({"format": "other", "vertices": []})


def test_dump_then_load_keeps_the_truncation(t3):
    reloaded = load_truncation(json.loads(json.dumps(dump_truncation(t3))))
    assert reloaded.map.rotation == t3.map.rotation
    assert reloaded.interior_flags == t3.interior_flags
    assert reloaded.host == t3.host


def _mutants(doc):
    """Single-vertex rotation swaps and single neighbor replacements, at interior vertices when flagged."""
    n = len(doc["vertices"])
    for v in doc.get("interior", range(n)):
        swapped = copy.deepcopy(doc)
        nbrs = swapped["vertices"][v]["neighbors"]
        nbrs[0], nbrs[1] = nbrs[1], nbrs[0]
        yield f"swap-{v}", swapped
        replaced = copy.deepcopy(doc)
        nbrs = replaced["vertices"][v]["neighbors"]
        nbrs[0] = (nbrs[0] + 1) % n
        yield f"replace-{v}", replaced


@pytest.mark.parametrize("name", ["cube.json", "octahedron.json", "pyramid.json", "g66_r4.json", "trihex_r6.json"])
def test_mutated_fixtures_are_rejected(fixture_doc, name):
    doc = fixture_doc(name)
    parse_truncation_document(doc)
    mutants = list(_mutants(doc))
    assert len(mutants) >= 10
    for label, mutant in mutants:
        with pytest.raises(InputError):
            parse_truncation_document(mutant)


def test_subset_stats_single_vertex(cube):
    stats = subset_stats(cube, [0])
    assert stats.volume == 3
    assert stats.edge_boundary == 3
    assert stats.vertex_boundary == 3
    assert stats.non_host_faces == 1
    assert stats.curvature == Fraction(1, 4)


def test_subset_stats_face(cube):
    stats = subset_stats(cube, [0, 1, 2, 3])
    assert stats.edge_count == 4
    assert stats.host_faces_inside == 1
    assert stats.non_host_faces == 1
    assert stats.edge_boundary == 4
    assert stats.boundary_face_sum == 2


def test_subset_stats_whole_finite_host(cube):
    stats = subset_stats(cube, range(8))
    assert stats.edge_boundary == 0
    assert stats.non_host_faces == 0
    assert stats.curvature == 2


def test_subset_stats_hexagon_ring(trihex):
    hexagon = next(trihex.map.faces[f] for f in sorted(trihex.host_face_ids)
                   if len(trihex.map.faces[f]) == 6 and all(trihex.is_interior(v) for v in trihex.map.faces[f]))
    stats = subset_stats(trihex, hexagon)
    assert stats.host_faces_inside == 1
    assert stats.non_host_faces == 1


def test_subset_stats_rejects_bad_subsets(cube, t3):
    with pytest.raises(SubsetDisconnected):
        subset_stats(cube, [0, 6])
    boundary = next(v for v in range(t3.vertex_count) if not t3.is_interior(v))
    with pytest.raises(SubsetTouchesBoundary):
        subset_stats(t3, [boundary])


def test_enumeration_matches_brute_force(cube):
    graph = to_networkx(cube.map)
    expected = {frozenset(c) for k in range(1, 9) for c in itertools.combinations(range(8), k)
                if nx.is_connected(graph.subgraph(c))}
    found = list(enumerate_connected_subsets(cube, 8))
    assert len(found) == len(set(found))
    assert set(found) == expected


def test_enumeration_respects_roots(octahedron):
    found = list(enumerate_connected_subsets(octahedron, 3, roots=[2]))
    assert found
    assert all(min(subset) == 2 for subset in found)


def test_enumeration_limit(g66):
    with pytest.raises(CapTooLargeForBudget):
        list(enumerate_connected_subsets(g66, 4, limit=50))


def test_cut_locus_of_cube(cube):
    locus = cut_locus(cube, 0)
    assert locus.members == (6,)
    assert locus.undetermined == ()


def test_cut_locus_of_tree_marks_the_edge_undetermined(t3):
    locus = cut_locus(t3, t3.center)
    assert locus.members == ()
    assert all(t3.center_distances[v] >= t3.radius - 1 for v in locus.undetermined)


@pytest.mark.parametrize("fixture", ["g66_r6", "g44"])
def test_no_cut_locus_from_any_interior_vertex(request, fixture):
    trunc = request.getfixturevalue(fixture)
    assert len(trunc.interior_vertices) > 80
    for v in trunc.interior_vertices:
        locus = cut_locus(trunc, v)
        assert locus.members == (), v
        assert v not in locus.undetermined


def test_enumeration_cap_below_one(cube):
    with pytest.raises(InvalidCap) as excinfo:
        list(enumerate_connected_subsets(cube, 0))
    assert excinfo.value.exit_code == 2


def test_shipped_trihex_patch_has_triangles_and_hexagons(fixtures_dir):
    trunc = load_truncation(fixtures_dir / "trihex_r6.json")
    assert trunc.host.family == "trihex"
    assert {trunc.face_degree(f) for f in trunc.host_face_ids} == {3, 6}
    assert all(sorted(trunc.corner_degrees(v)) == [3, 3, 6, 6] for v in trunc.interior_vertices)
