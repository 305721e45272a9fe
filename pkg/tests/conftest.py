from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from brute import BruteScheme  # noqa: E402

from scheme_forge import omega_scheme, preset  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def tau2():
    return preset("tau2")


@pytest.fixture(scope="session")
def tau4():
    return preset("tau4")


@pytest.fixture(scope="session")
def h2(tau2):
    return omega_scheme(tau2)


@pytest.fixture(scope="session")
def h4(tau4):
    return omega_scheme(tau4)


@pytest.fixture(scope="session")
def brute2(tau2):
    # range(20) is a level-5 member
    return BruteScheme.of(tau2, 5)


@pytest.fixture(scope="session")
def brute4(tau4):
    # range(196) is a level-4 member
    return BruteScheme.of(tau4, 4)
