import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def grid64():
    from acfilter.spectral import PeriodicGrid1D

    return PeriodicGrid1D(64)


@pytest.fixture(scope="session")
def grid256():
    from acfilter.spectral import PeriodicGrid1D

    return PeriodicGrid1D(256)


@pytest.fixture(scope="session")
def sin_field256(grid256):
    from acfilter.spectral import SpectralField1D

    return SpectralField1D.from_values(grid256, np.sin(grid256.nodes))
