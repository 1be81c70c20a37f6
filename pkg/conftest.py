import numpy as np
import pytest

from config import get_config
from services.function_catalog import FunctionDescriptor
from services.hermitian import HermitianMatrix
from services.sampler import SamplerConfig, random_hermitian, random_positive_definite, trial_rng

SEED = 4774


def reciprocal():
    """1/x on (0, inf); not part of the catalog but handy for closed forms"""
    return FunctionDescriptor(
        name='reciprocal',
        value=lambda x: 1.0 / np.asarray(x, dtype=float),
        deriv1=lambda x: -1.0 / np.square(x),
        deriv2=lambda x: 2.0 / np.power(np.asarray(x, dtype=float), 3),
        domain_min=0.0,
        domain_inclusive=False,
        operator_convex=True
    )


def pd_pairs(count, dims=(1, 2, 3, 4), seed=SEED):
    """Seeded positive definite pairs (A, B) cycling through dims"""
    pairs = []
    for index in range(count):
        rng = trial_rng(seed, index)
        cfg = SamplerConfig(seed=seed, dim=dims[index % len(dims)])
        pairs.append((random_positive_definite(cfg, rng), random_positive_definite(cfg, rng)))
    return pairs


@pytest.fixture(scope="session")
def testing_config():
    return get_config('testing')


@pytest.fixture
def inverse_function():
    return reciprocal()


@pytest.fixture
def two_by_two():
    return HermitianMatrix(np.array([[2.0, 1.0], [1.0, 2.0]]))


@pytest.fixture
def hermitian_direction():
    rng = trial_rng(SEED, 999)
    return random_hermitian(SamplerConfig(seed=SEED, dim=3), rng)


@pytest.fixture
def pd_matrix():
    rng = trial_rng(SEED, 998)
    return random_positive_definite(SamplerConfig(seed=SEED, dim=3, eigen_floor=0.5), rng)
