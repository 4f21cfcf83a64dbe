"""
conftest.py

Shared fixtures: shipped truncation files and generated host balls, built once per session.
Logfire is configured offline so tests never send or print telemetry.
"""

import json
from pathlib import Path

import logfire
import pytest

import settings
from generators import generate_gpq, generate_tree, generate_trihex
from planar_core import load_truncation

logfire.configure(send_to_logfire=False, console=False)
settings._logging_configured = True

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def fixture_doc():
    def read(name: str) -> dict:
        with open(FIXTURES / name, "r", encoding="utf-8") as f:
            return json.load(f)
    return read


@pytest.fixture(scope="session")
def cube():
    return load_truncation(FIXTURES / "cube.json")


@pytest.fixture(scope="session")
def octahedron():
    return load_truncation(FIXTURES / "octahedron.json")


@pytest.fixture(scope="session")
def pyramid():
    return load_truncation(FIXTURES / "pyramid.json")


@pytest.fixture(scope="session")
def g66():
    return generate_gpq(6, 6, 5)


@pytest.fixture(scope="session")
def g44():
    return generate_gpq(4, 4, 8)


@pytest.fixture(scope="session")
def t3():
    return generate_tree(3, 8)


@pytest.fixture(scope="session")
def trihex():
    return generate_trihex(7)


@pytest.fixture(scope="session")
def g37():
    return generate_gpq(3, 7, 7)


@pytest.fixture(scope="session")
def g66_r6():
    return generate_gpq(6, 6, 6)
