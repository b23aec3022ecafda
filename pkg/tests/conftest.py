import sys
from pathlib import Path

import pytest

# Add parent directory to path to import root modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from fixtures import fixture  # noqa: E402
from lpa_algebra import LeavittAlgebra  # noqa: E402

FIXTURE_NAMES = ["g1", "g3", "g4", "g6", "g7", "g8"]


@pytest.fixture
def g1():
    return fixture("g1")


@pytest.fixture
def g3():
    return fixture("g3")


@pytest.fixture
def g4():
    return fixture("g4")


@pytest.fixture
def g6():
    return fixture("g6")


@pytest.fixture
def g7():
    return fixture("g7")


@pytest.fixture
def g8():
    return fixture("g8")


@pytest.fixture
def algebra_of():
    """Factory: algebra_of("g3") or algebra_of("g4", "gf:5")."""
    def make(name, field="q"):
        return LeavittAlgebra(fixture(name), field)
    return make
