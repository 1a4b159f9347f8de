import pytest
from hypothesis import HealthCheck, settings

import latticebounds as lb

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def z2_spec():
    return lb.enumerate_spectrum(lb.builtin_lattice("Z2"), 2.3)


@pytest.fixture(scope="session")
def z2_deep():
    # horizon past all radii the optimizers probe at the test noise levels
    return lb.enumerate_spectrum(lb.builtin_lattice("Z2"), 4.0)


@pytest.fixture(scope="session")
def d4_spec():
    return lb.enumerate_spectrum(lb.builtin_lattice("D4"), 3.2)


@pytest.fixture(scope="session")
def e8_spec():
    return lb.enumerate_spectrum(lb.builtin_lattice("E8"), 3.2)


@pytest.fixture(scope="session")
def leech_spec():
    return lb.catalog_spectrum("Leech")
