import numpy as np
import pytest

from symverif.smt.solver import find_solver
from symverif.utils.generic import load_config


@pytest.fixture
def rng():
    return np.random.RandomState(1984)


@pytest.fixture
def config():
    return load_config()


@pytest.fixture
def solver():
    path = find_solver()
    if path is None:
        pytest.skip('no SMT solver on the PATH')
    return path
