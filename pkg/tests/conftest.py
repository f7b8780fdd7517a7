"""Shared fixtures: small grids and a deterministic generator."""

import numpy as np
import pytest

from sobolev_pointwise import GridSpec


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def grid_1d():
    return GridSpec.cube(-1.0, 1.0, 201, 1)


@pytest.fixture
def grid_2d():
    return GridSpec.cube(-1.0, 1.0, 81, 2)
