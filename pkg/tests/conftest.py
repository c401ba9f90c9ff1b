"""Shared fixtures: the reference quasicrystal, seeded point sets and small images"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from modules.app_config import reset_app_config  # noqa: E402
from modules.cut_project import enumerate_2d, qc2d, reference_windows  # noqa: E402
from modules.output_manager import reset_output_manager  # noqa: E402
from modules.sequence import SampleSequence  # noqa: E402
from modules.test_images import testimage  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_singletons():
    """Every test starts from default settings and an empty output log"""
    config = reset_app_config()
    reset_output_manager()
    yield config
    reset_app_config()
    reset_output_manager()


@pytest.fixture(scope='session')
def reference_windows_pair():
    return reference_windows()


@pytest.fixture(scope='session')
def reference_coeffs(reference_windows_pair):
    accept, view = reference_windows_pair
    return enumerate_2d(accept, view)


@pytest.fixture(scope='session')
def reference_points(reference_windows_pair):
    accept, view = reference_windows_pair
    return qc2d(accept, view)


@pytest.fixture(scope='session')
def reference_positions(reference_points):
    return np.array([p.position for p in reference_points], dtype=float)


@pytest.fixture
def random_points():
    rng = np.random.default_rng(12345)
    return rng.random((200, 2))


@pytest.fixture
def random_sequence(random_points):
    return SampleSequence('random', 0, random_points)


@pytest.fixture
def corner_sequence():
    return SampleSequence('file', 0, np.array([[0.0, 0.0], [0.999, 0.0], [0.0, 0.999], [0.999, 0.999]]))


@pytest.fixture
def ramp_image():
    return testimage('ramp', 32)


@pytest.fixture
def spiral_image():
    return testimage('spiral', 64)
