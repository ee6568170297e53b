import random

import pytest

from rackmsr.code_c1 import build_c1
from rackmsr.code_c3 import build_c3
from rackmsr.code_oa import build_c2
from rackmsr.code_rs import build_rs


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(scope="session")
def c1_demo():
    return build_c1(4, 2, 5, 3)


@pytest.fixture(scope="session")
def c2_demo():
    return build_c2(4, 2, 3)


@pytest.fixture(scope="session")
def c3_demo():
    return build_c3(3, 2, 3, 2)


@pytest.fixture(scope="session")
def rs_big():
    """q=3, u=2, three racks, k=3, two helper racks: K = GF(3^210)."""
    return build_rs(3, 2, 3, 3, 2)


@pytest.fixture(scope="session")
def rs_small():
    """q=4, u=3, two racks, k=3, one helper rack: K = GF(4^35)."""
    return build_rs(4, 3, 2, 3, 1)
