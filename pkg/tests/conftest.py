import pytest

from ucf import catalog


@pytest.fixture(scope="session")
def triangle():
    return catalog.triangle_family()


@pytest.fixture(scope="session")
def pentagon():
    return catalog.pentagon_family()


@pytest.fixture(scope="session")
def path():
    return catalog.path_family()


@pytest.fixture(scope="session")
def hub():
    return catalog.hub_graph_family()
