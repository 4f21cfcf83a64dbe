import json

import mongomock
import pytest

import tessellab


def run(capsys, *argv):
    code = tessellab.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def tree_file(tmp_path, capsys):
    path = tmp_path / "t3.json"
    code, out, _ = run(capsys, "generate", "--family", "tree", "--p", "3", "--radius", "5", "--out", str(path))
    assert code == 0
    return path


def test_help_exits_cleanly(capsys):
    with pytest.raises(SystemExit) as excinfo:
        tessellab.main(["--help"])
    assert excinfo.value.code == 0


def test_generate_json(tmp_path, capsys):
    path = tmp_path / "g66.json"
    code, out, _ = run(capsys, "generate", "--family", "gpq", "--p", "6", "--q", "6", "--radius", "3",
                       "--out", str(path), "--json")
    assert code == 0
    document = json.loads(out)
    assert document["report"] == "GenerationSummary"
    assert document["vertices"] == 1 + 6 + 30 + 144
    assert path.exists()


def test_generate_spherical_is_an_input_error(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "--family", "gpq", "--p", "3", "--q", "5", "--radius", "2",
                       "--out", str(tmp_path / "x.json"))
    assert code == 2
    assert "SphericalParameters" in err


def test_generate_over_budget_is_a_computation_error(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "--family", "tree", "--p", "3", "--radius", "10", "--budget-vertices",
                       "100", "--out", str(tmp_path / "x.json"))
    assert code == 1
    assert "BudgetExceeded" in err


def test_curvature(fixtures_dir, capsys):
    code, out, _ = run(capsys, "curvature", str(fixtures_dir / "cube.json"), "--json", "--per-vertex")
    assert code == 0
    document = json.loads(out)
    assert document["b"] == {"num": -1, "den": 4}
    assert document["vertex_curvatures"]["0"] == {"num": 1, "den": 4}


def test_cheeger(tree_file, capsys):
    code, out, _ = run(capsys, "cheeger", str(tree_file), "--cap", "4", "--no-prune", "--json")
    assert code == 0
    document = json.loads(out)
    assert document["physical_by_size"]["4"] == {"num": 3, "den": 2}


def test_cheeger_cap_below_one_is_an_input_error(tree_file, capsys):
    code, _, err = run(capsys, "cheeger", str(tree_file), "--cap", "0")
    assert code == 2
    assert "InvalidCap" in err


def test_growth_with_comparison(tree_file, capsys):
    code, out, _ = run(capsys, "growth", str(tree_file), "--compare", "3,inf", "--json")
    assert code == 0
    document = json.loads(out)
    assert document["report"] == "GrowthComparison"
    assert document["series"]["sphere_sizes"] == [1, 3, 6, 12, 24, 48]
    assert document["comparison"]["verdict"] == "consistent"


def test_growth_bad_compare_is_an_input_error(tree_file, capsys):
    code, _, _ = run(capsys, "growth", str(tree_file), "--compare", "nonsense")
    assert code == 2


def test_spectrum(tree_file, capsys):
    code, out, _ = run(capsys, "spectrum", str(tree_file), "--radii", "0:9")
    assert code == 0
    assert "radius 4" in out
    assert "radius 5" not in out


def test_eigenfunctions(fixtures_dir, capsys):
    code, out, _ = run(capsys, "eigenfunctions", str(fixtures_dir / "octahedron.json"), "--region-radius", "2",
                       "--json")
    assert code == 0
    document = json.loads(out)
    assert document["all_verified"] is True
    assert len(document["certificates"]) == 6


def test_verify_exit_codes(fixtures_dir, capsys):
    code, out, _ = run(capsys, "verify", str(fixtures_dir / "cube.json"))
    assert code == 0
    assert "Verification summary" in out
    code, _, err = run(capsys, "verify", str(fixtures_dir / "corrupted.json"))
    assert code == 2
    assert "InconsistentAdjacency" in err


@pytest.mark.parametrize("name", ["g66_r4.json", "trihex_r6.json"])
def test_verify_passes_on_shipped_host_patches(fixtures_dir, capsys, name):
    code, out, _ = run(capsys, "verify", str(fixtures_dir / name), "--json")
    assert code == 0
    document = json.loads(out)
    assert document["failed"] == 0
    statuses = {check["name"]: check["status"] for check in document["checks"]}
    assert statuses["eigenfunctions"] == "pass"
    assert statuses["sphere_sizes"] == "pass"


def test_report_prints_sections(fixtures_dir, capsys):
    code, out, _ = run(capsys, "report", str(fixtures_dir / "pyramid.json"), "--cap", "3")
    assert code == 0
    document = json.loads(out)
    assert document["report"] == "CombinedReport"
    assert set(document) >= {"curvature", "cheeger", "growth", "spectrum", "input_digest"}


def test_report_store_and_purge(fixtures_dir, capsys, monkeypatch):
    client = mongomock.MongoClient()
    monkeypatch.setattr(tessellab, "get_client", lambda settings: client)
    monkeypatch.setattr(tessellab, "ping", lambda c: True)
    monkeypatch.setenv("DB_NAME", "tessellab_test")
    path = str(fixtures_dir / "cube.json")

    code, out, err = run(capsys, "report", path, "--cap", "3", "--store")
    assert code == 0
    assert out == ""
    assert "Stored report" in err
    assert client["tessellab_test"]["Reports"].count_documents({}) == 1

    code, _, err = run(capsys, "report", path, "--cap", "3", "--purge")
    assert code == 0
    assert "Deleted 1" in err
    assert client["tessellab_test"]["Reports"].count_documents({}) == 0


def test_report_store_unreachable(fixtures_dir, capsys, monkeypatch):
    monkeypatch.setattr(tessellab, "get_client", lambda settings: mongomock.MongoClient())
    monkeypatch.setattr(tessellab, "ping", lambda c: False)
    code, _, err = run(capsys, "report", str(fixtures_dir / "cube.json"), "--cap", "2", "--store")
    assert code == 1
    assert "unreachable" in err
