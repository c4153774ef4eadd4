import numpy as np
import pytest

from crdu import (
    Act,
    Capacity,
    Distortion,
    ProbabilityMeasure,
    RiskPartition,
    StateSpace,
    Utility,
)


@pytest.fixture
def abc():
    return StateSpace(("a", "b", "c"))


@pytest.fixture
def ab():
    return StateSpace(("a", "b"))


@pytest.fixture
def uniform3(abc):
    return ProbabilityMeasure.uniform(abc)


@pytest.fixture
def uniform2(ab):
    return ProbabilityMeasure.uniform(ab)


@pytest.fixture
def worked_capacity(abc):
    """Three-state capacity used across the worked examples."""
    return Capacity.from_values(abc, {
        frozenset([0]): 0.2, frozenset([1]): 0.3, frozenset([2]): 0.1,
        frozenset([0, 1]): 0.6, frozenset([0, 2]): 0.4, frozenset([1, 2]): 0.5,
    })


@pytest.fixture
def gap_capacity(abc):
    """Balanced but not supermodular: two heavy pairs over empty singletons."""
    return Capacity.from_values(abc, {
        frozenset([0]): 0.0, frozenset([1]): 0.0, frozenset([2]): 0.0,
        frozenset([0, 1]): 0.8, frozenset([0, 2]): 0.8, frozenset([1, 2]): 0.0,
    })


@pytest.fixture
def act312(abc):
    return Act(abc, (3.0, 1.0, 2.0))


@pytest.fixture
def identity_u():
    return Utility.identity(lo=-8.0, hi=8.0)


@pytest.fixture
def identity_g():
    return Distortion.identity()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_measure(space, *weights):
    return ProbabilityMeasure(space, tuple(weights))


def coarse(space, *groups):
    return RiskPartition.from_labels(space, groups)
