import pytest

from circledyn import (
    linear_map,
    make_conjugated,
    piecewise_linear,
    sine_homeo,
    smooth_sine_map,
)


@pytest.fixture(scope="session")
def f06():
    return piecewise_linear([0.6])


@pytest.fixture(scope="session")
def f09():
    return piecewise_linear([0.9])


@pytest.fixture(scope="session")
def lin2():
    return linear_map(2)


@pytest.fixture(scope="session")
def smooth05():
    return smooth_sine_map(2, 0.5)


@pytest.fixture(scope="session")
def conj_smooth():
    return make_conjugated(linear_map(2), sine_homeo(0.5))
