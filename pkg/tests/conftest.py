import pytest

from resetfpa.model import ResetModel


@pytest.fixture
def canonical():
    """mu=0, r=1, x_R=1: the parameter point most reference values use."""
    return ResetModel(mu=0.0, r=1.0, x_reset=1.0)


@pytest.fixture
def drifted():
    return ResetModel(mu=-1.0, r=1.0, x_reset=1.0)
