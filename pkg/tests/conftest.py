import numpy as np
import pytest

from plnr.gf import makeField


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def gf3():
    return makeField(3)


@pytest.fixture
def gf4():
    return makeField(2, 2)


@pytest.fixture
def gf8():
    return makeField(2, 3)


@pytest.fixture
def gf9():
    return makeField(3, 2)


@pytest.fixture
def gf16():
    return makeField(2, 4)


@pytest.fixture
def gf27():
    return makeField(3, 3)
