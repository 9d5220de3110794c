import pytest

from homdist.cli import bundled_fixtures
from homdist.io import Workspace


@pytest.fixture(scope="session")
def ws():
    return Workspace.load(bundled_fixtures())


@pytest.fixture(scope="session")
def S(ws):
    return ws.poset("S")


@pytest.fixture(scope="session")
def torus(ws):
    return ws.poset("X")


@pytest.fixture(scope="session")
def fgh(ws):
    return ws.map("f"), ws.map("g"), ws.map("h")
