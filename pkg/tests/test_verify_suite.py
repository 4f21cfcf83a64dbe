import re

import pytest

import verify_suite
from errors import ParseError
from generators import generate_tree
from planar_core import DEFAULT_ENUMERATION_LIMIT
from settings import TOLERANCE_PROFILES, Tolerances
from verify_suite import CHECKS, SPECS, _Context, check_cut_locus, check_polygon_completion, run_verify


def _statuses(suite):
    return {check.name: check.status for check in suite.checks}


@pytest.mark.parametrize("name", ["cube.json", "octahedron.json", "pyramid.json"])
def test_finite_fixtures_pass(fixtures_dir, name):
    suite = run_verify(fixtures_dir / name)
    assert suite.ok, [c for c in suite.checks if c.status == "fail"]
    assert suite.failed == 0
    statuses = _statuses(suite)
    assert statuses["planarity"] == "pass"
    assert statuses["curvature_constants"] == "pass"
    assert statuses["bishop_comparison"] == "skipped"
    assert suite.passed + suite.skipped == len(suite.checks)


def test_g66_passes(g66):
    suite = run_verify(g66, "small", TOLERANCE_PROFILES["default"])
    assert suite.failed == 0, [c for c in suite.checks if c.status == "fail"]
    statuses = _statuses(suite)
    for name in ("spectral_interval", "sphere_sizes", "sphere_difference", "hjl_exact", "cut_locus", "eigenfunctions",
                 "growth_lower_bound", "bishop_comparison"):
        assert statuses[name] == "pass"
    assert statuses["tree_sharpness"] == "skipped"


def test_tree_passes():
    suite = run_verify(generate_tree(3, 6))
    assert suite.failed == 0, [c for c in suite.checks if c.status == "fail"]
    statuses = _statuses(suite)
    assert statuses["tree_sharpness"] == "pass"
    assert statuses["growth_lower_bound"] == "pass"


def test_trihex_passes(trihex):
    suite = run_verify(trihex)
    assert suite.failed == 0, [c for c in suite.checks if c.status == "fail"]
    eigen = next(c for c in suite.checks if c.name == "eigenfunctions")
    assert eigen.status == "pass"
    assert eigen.kind == "example"


def test_check_records_are_complete(cube):
    suite = run_verify(cube)
    assert suite.source is None
    assert suite.family == "custom"
    for check in suite.checks:
        assert check.anchor
        assert check.kind in ("identity", "inequality", "example")
        assert check.mode in ("exact", "tolerance")


def test_corrupted_input_propagates(fixtures_dir):
    with pytest.raises(ParseError):
        run_verify(fixtures_dir / "corrupted.json")


def _context(trunc, profile="small"):
    return _Context(trunc, profile, Tolerances(), 0, DEFAULT_ENUMERATION_LIMIT)


def test_anchors_are_unique_ids():
    anchors = [spec.anchor for spec in SPECS.values()]
    assert len(set(anchors)) == len(anchors)
    assert all(re.fullmatch(r"[a-z0-9]+(-[a-z0-9]+)*", anchor) for anchor in anchors)
    assert [run.check_name for run in CHECKS] == list(SPECS)


def test_records_carry_registered_metadata(cube):
    suite = run_verify(cube)
    assert [check.name for check in suite.checks] == list(SPECS)
    for check in suite.checks:
        spec = SPECS[check.name]
        assert check.anchor == spec.anchor
        if check.status == "skipped":
            assert (check.kind, check.mode) == (spec.kind, spec.mode)
        else:
            assert check.detail.startswith(spec.statement)


def test_completion_check_fills_a_ring(g44):
    center = g44.center
    ring = frozenset(v for f in g44.corner_faces(center) for v in g44.map.faces[f]) - {center}
    ctx = _context(g44)
    ctx.subsets = [ring]
    result = check_polygon_completion(ctx)
    assert result.status == "pass"
    assert "1 sets completed" in result.detail


def test_completion_check_reports_a_larger_quotient(g66, monkeypatch):
    ctx = _context(g66)
    ctx.subsets = [frozenset(g66.ball(1)[:2])]
    monkeypatch.setattr(verify_suite, "polygon_completion", lambda trunc, members: (min(members),))
    result = check_polygon_completion(ctx)
    assert result.status == "fail"
    assert result.observed == 1
    assert "quotient increased" in result.detail


def test_cut_locus_check_covers_interior_sources(g66):
    small = check_cut_locus(_context(g66))
    near = sum(1 for v in g66.ball(2) if g66.is_interior(v))
    assert small.status == "pass"
    assert small.detail.endswith(f"{near} source vertices")
    full = check_cut_locus(_context(g66, "full"))
    assert full.status == "pass"
    assert full.detail.endswith(f"{len(g66.interior_vertices)} source vertices")
