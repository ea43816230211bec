import pytest

from hovels.groups import instantiate
from hovels.roots import build_root_system

A1 = [[2]]
A2 = [[2, -1], [-1, 2]]
A3 = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
AFF_A1 = [[2, -2], [-2, 2]]


@pytest.fixture(scope="session")
def a1():
    return build_root_system(A1)


@pytest.fixture(scope="session")
def a2():
    return build_root_system(A2)


@pytest.fixture(scope="session")
def aff():
    return build_root_system(AFF_A1)


@pytest.fixture(scope="session")
def sl2():
    return instantiate("SL2", 2)


@pytest.fixture(scope="session")
def sl3():
    return instantiate("SL3", 2)


@pytest.fixture(scope="session")
def loop():
    return instantiate("LoopSL2", 2)
