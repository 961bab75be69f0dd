import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from growthlab import MarkedGroup


@pytest.fixture(scope="session")
def f2():
    return MarkedGroup.free(2)


@pytest.fixture(scope="session")
def z23():
    return MarkedGroup.free_product([2, 3])


@pytest.fixture(scope="session")
def z22():
    return MarkedGroup.free_product([2, 2])


@pytest.fixture(scope="session")
def z42():
    return MarkedGroup.free_product([4, 2])
