import numpy as np
import pytest

from qudit_bell import JointDistribution


def random_distribution(d: int, rng: np.random.Generator) -> JointDistribution:
    """Random valid distribution: one Dirichlet draw per setting pair."""
    table = rng.dirichlet(np.ones(d * d), size=4).reshape(2, 2, d, d)
    return JointDistribution(d, table)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
