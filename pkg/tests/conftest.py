import math

import pytest

from qmonty import kernels
from qmonty.streams import make_rng


@pytest.fixture
def rng():
    return make_rng(20260815)


def approx_vec(a, b, tol=1e-12):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def same_ray(a, b, tol=1e-9):
    """True when two unit vectors agree up to a global phase."""
    return 1.0 - abs(kernels.inner(a, b)) <= tol


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)
