import pytest

from spanlab.common.classes import Flavor, Graph, HierarchyInstance
from spanlab.common.toy import erdos_renyi
from spanlab.lower_bounds.girth import build_Hk_gamma, projective_plane_graph
from spanlab.lower_bounds.instances import build_Hk


@pytest.fixture(scope="session")
def spanner_small() -> HierarchyInstance:
    """k=2, l=2, a single label per factor: 9 pairs"""
    return build_Hk(9, 2, 2, Flavor.SPANNER, seed=1)


@pytest.fixture(scope="session")
def spanner_36() -> HierarchyInstance:
    """k=2, l=2, labels (1, 2) over 6 x 6: 144 pairs"""
    return build_Hk(36, 2, 2, Flavor.SPANNER, seed=1)


@pytest.fixture(scope="session")
def hopset_16() -> HierarchyInstance:
    return build_Hk(16, 2, 2, Flavor.HOPSET, seed=1)


@pytest.fixture(scope="session")
def girth_gamma1() -> HierarchyInstance:
    return build_Hk_gamma(36, 2, 2, 1, seed=1)


@pytest.fixture(scope="session")
def girth_gamma2() -> HierarchyInstance:
    return build_Hk_gamma(64, 2, 2, 2, seed=1)


@pytest.fixture(scope="session")
def er_64() -> Graph:
    return erdos_renyi(64, 0.15, seed=0)


@pytest.fixture(scope="session")
def fano() -> Graph:
    return projective_plane_graph(2)
