import numpy as np
import pytest

from oscint import Characteristic, OperatorSpec, SmoothBump


@pytest.fixture
def chi():
    return Characteristic(0.0, 1.0)


@pytest.fixture
def bump():
    return SmoothBump(0.5, 1.0)


@pytest.fixture
def spec256(chi, bump):
    return OperatorSpec(256.0, cutoff=bump, f=chi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
