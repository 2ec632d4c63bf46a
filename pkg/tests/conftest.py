import pytest
from hypothesis import HealthCheck, settings

from linfcourant.sampling import Sampler

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def sampler3():
    return Sampler(1234, 3)


@pytest.fixture
def sampler4():
    return Sampler(4321, 4)
