import numpy as np
import pytest

from afrkit import compute_norm_stats, generate_dataset, get_profile


@pytest.fixture(scope="session")
def qoe_q():
    return get_profile("qoe_q")


@pytest.fixture(scope="session")
def qoe_b():
    return get_profile("qoe_b")


@pytest.fixture(scope="session")
def small_dataset():
    return generate_dataset(6, seed=123, chunks_range=(8, 14))


@pytest.fixture(scope="session")
def small_norm(small_dataset):
    return compute_norm_stats(small_dataset)


@pytest.fixture
def rng():
    # fresh generator per test so the suite is order-independent
    return np.random.default_rng(20260815)
