import numpy as np
import pytest

from lieharm.catalog import BUILTIN_CATALOG, resolve
from lieharm.config import VerifyConfig
from lieharm.suites import VerificationContext

ALGEBRA_IDS = sorted(BUILTIN_CATALOG)


@pytest.fixture(scope="session")
def context_for():
    """Shared VerificationContext per algebra id, so every realization is built once."""
    cache = {}

    def get(algebra_id):
        if algebra_id not in cache:
            cache[algebra_id] = VerificationContext(resolve(algebra_id), VerifyConfig(samples=10))
        return cache[algebra_id]
    return get


@pytest.fixture(scope="session")
def sl2(context_for):
    return context_for("sl2")


@pytest.fixture(scope="session")
def sl3(context_for):
    return context_for("sl3")


@pytest.fixture(scope="session")
def su12(context_for):
    return context_for("su12")


@pytest.fixture(scope="session")
def g2split(context_for):
    return context_for("g2split")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
