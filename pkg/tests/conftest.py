import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# Numerical property tests: generous deadlines (eigen solves, quadrature),
# fixed derivation so CI and local runs see the same examples.
settings.register_profile(
    "numeric",
    derandomize=True,
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
