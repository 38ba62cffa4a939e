import numpy as np
import pytest

from conelab import catalog
from conelab.rng import SplitMix64


@pytest.fixture(scope="session")
def blair():
    return catalog.get("t3-blair")


@pytest.fixture(scope="session")
def unnormalized():
    return catalog.get("t3-unnormalized")


@pytest.fixture(scope="session")
def s3():
    return catalog.get("s3-round")


@pytest.fixture(scope="session")
def s5():
    return catalog.get("s5-round")


@pytest.fixture()
def rng():
    return SplitMix64(0xC0FFEE)


def sample(chart, n, seed=0xC0FFEE):
    gen = SplitMix64(seed)
    pts = chart.sample_points(n, gen)
    radii = gen.uniforms(n, 0.5, 3.0)
    dirs = [np.array([gen.unit_vector(chart.dim) for _ in range(n)])
            for _ in range(3)]
    return pts, radii, dirs
