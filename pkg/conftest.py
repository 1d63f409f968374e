"""
Shared fixtures; every explored braid edge is checked during tests
"""
import os

os.environ["EDGE_CHECK_RATE"] = "1.0"
os.environ.setdefault("LOG_LEVEL", "WARNING")

import pytest  # noqa: E402

from app.services.parser import parse_spec  # noqa: E402
from app.services.rootsys import build_root_system  # noqa: E402


def rootsystem(label: str):
    return build_root_system(parse_spec(label))


@pytest.fixture
def a1():
    return rootsystem("A1")


@pytest.fixture
def a2():
    return rootsystem("A2")


@pytest.fixture
def a3():
    return rootsystem("A3")


@pytest.fixture
def b2():
    return rootsystem("B2")


@pytest.fixture
def b3():
    return rootsystem("B3")


@pytest.fixture
def g2():
    return rootsystem("G2")


@pytest.fixture
def a1a1():
    return rootsystem("A1+A1")
