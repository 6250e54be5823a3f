import random

import pytest

from formats import DATA_DIR, load_quiver, load_representation
from homalg import gram_matrix_simples

BONDAL_GRAM = [[1, -2, 2], [0, 1, -2], [0, 0, 1]]
BONDAL_PROJECTIVES = [[1, 2, 2], [0, 1, 2], [0, 0, 1]]


@pytest.fixture(scope="session")
def bondal():
    return load_quiver("bondal")


@pytest.fixture(scope="session")
def a2():
    return load_quiver("a2")


@pytest.fixture(scope="session")
def point():
    return load_quiver("point")


@pytest.fixture(scope="session")
def bondal_form(bondal):
    return gram_matrix_simples(bondal).form


@pytest.fixture(scope="session")
def bondal_p(bondal):
    return load_representation(str(DATA_DIR / "bondal_P.rep"), bondal)


@pytest.fixture
def rng():
    return random.Random(20240611)
