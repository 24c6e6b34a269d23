import functools

import pytest
from hypothesis import HealthCheck, settings

from metarep.knotio import knot_from_spec

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def knot(spec):
    return knot_from_spec(spec)


@pytest.fixture(scope="session")
def trefoil():
    return knot("3_1")


@pytest.fixture(scope="session")
def fig8():
    return knot("4_1")


@pytest.fixture(scope="session")
def unknot_p():
    return knot("unknot")
