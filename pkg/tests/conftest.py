"""Shared fixtures: the five desk-scale algebras, built once per session."""

import pytest
from hypothesis import HealthCheck, settings

from toda2 import build_gl, build_sl

settings.register_profile(
    "desk",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("desk")


@pytest.fixture(scope="session")
def sl2():
    return build_sl(2)


@pytest.fixture(scope="session")
def sl3():
    return build_sl(3)


@pytest.fixture(scope="session")
def sl4():
    return build_sl(4)


@pytest.fixture(scope="session")
def gl2():
    return build_gl(2)


@pytest.fixture(scope="session")
def gl3():
    return build_gl(3)


@pytest.fixture(scope="session")
def desk_algebras(sl2, sl3, sl4, gl2, gl3):
    """All five, keyed by name, for tests that sweep the whole desk."""
    return {a.name: a for a in (sl2, sl3, sl4, gl2, gl3)}
