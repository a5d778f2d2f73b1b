"""Shared fixtures: benchmark problems and small reference operators."""

import numpy as np
import pytest

from illposed import (
    DiscreteOperator,
    Grid,
    build_fredholm_operator,
    build_integration_operator,
    make_problem,
    truth_hat,
    truth_sin1,
)


@pytest.fixture(scope="session")
def fredholm64_hat():
    return make_problem("fredholm", 64, truth_hat)


@pytest.fixture(scope="session")
def fredholm64_sin1():
    return make_problem("fredholm", 64, truth_sin1)


@pytest.fixture(scope="session")
def fredholm32_hat():
    return make_problem("fredholm", 32, truth_hat)


@pytest.fixture(scope="session")
def fredholm16_op():
    return build_fredholm_operator(None, 16)


@pytest.fixture(scope="session")
def integration32_op():
    return build_integration_operator(32)


@pytest.fixture
def scalar_op():
    """1x1 identity operator; h = 1 so all norms coincide."""
    return DiscreteOperator(Grid(1), [[1.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
