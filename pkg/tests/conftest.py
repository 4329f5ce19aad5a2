import pytest

from catalog_io import catalog_get, parse_algebra
from paracomplex import validate


@pytest.fixture
def entry():
    """Catalog entries by name: ``entry("ex2.5")``."""
    return catalog_get


@pytest.fixture
def nil6_pure():
    e = catalog_get("ex2.5")
    return e.algebra, e.structures["K"]


@pytest.fixture
def nil6_mixed():
    e = catalog_get("ex2.6")
    return e.algebra, e.structures["K"]


@pytest.fixture
def solv4():
    return catalog_get("ex2.17")


@pytest.fixture
def heis3():
    return parse_algebra("(0,0,12)")


@pytest.fixture
def filiform4():
    return parse_algebra("(0,0,12,13)")


@pytest.fixture
def torus4():
    g = parse_algebra("(0,0,0,0)")
    return g, validate("(+,+,-,-)", g)
