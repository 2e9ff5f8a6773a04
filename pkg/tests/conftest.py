import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from besovlab.kernels import build_lp_pair, build_mollifier
from besovlab.spectral import Torus


@pytest.fixture(scope="session")
def torus64():
    return Torus(1, 1.0, 64)


@pytest.fixture(scope="session")
def torus1k():
    return Torus(1, 1.0, 1024)


@pytest.fixture(scope="session")
def torus4k():
    return Torus(1, 1.0, 4096)


@pytest.fixture(scope="session")
def torus16k():
    return Torus(1, 1.0, 16384)


@pytest.fixture(scope="session")
def moll32():
    return build_mollifier(32.0)


@pytest.fixture(scope="session")
def pair32():
    return build_lp_pair(32.0, 0.5)
