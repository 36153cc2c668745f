"""Shared fixtures and numeric helpers for the test suite."""

import pathlib

import numpy as np
import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA_DIR


def central_difference(f, x, eps=1e-6):
    """Central finite-difference gradient of a scalar function of a vector."""
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for idx in range(x.size):
        step = np.zeros_like(x)
        step.flat[idx] = eps
        grad.flat[idx] = (f(x + step) - f(x - step)) / (2.0 * eps)
    return grad
