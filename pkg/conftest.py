import math

import pytest

from fockflow.config.settings import load_config
from fockflow.models.flow_spec import SourceRep, VortexRep
from fockflow.models.state_spec import Truncation


@pytest.fixture
def config():
    return load_config()


@pytest.fixture
def unit_vortex():
    return VortexRep(gamma=2.0 * math.pi)


@pytest.fixture
def unit_source():
    return SourceRep(n_strength=2.0 * math.pi)


@pytest.fixture
def trunc():
    return Truncation()


def close(a: complex, b: complex, rel: float = 1e-12, abs_tol: float = 1e-14) -> bool:
    """Complex closeness with a relative and an absolute floor"""
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_tol)
