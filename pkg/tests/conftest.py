import numpy as np
import pytest

from warpgeo.ambient import AmbientChart
from warpgeo.immersion import immersion


@pytest.fixture
def sphere_slice():
    def make(r=1.0, m=2):
        variables = ["u", "v", "w", "s"][:m]
        return immersion(
            variables, variables + ["r"], {"r": r}, AmbientChart("sphere", m + 1)
        )

    return make


@pytest.fixture
def cone():
    def make(r=1.0):
        return immersion(
            ("u", "v"),
            ("r*u*cos(v)", "r*u*sin(v)", "u"),
            {"r": r},
            AmbientChart("euclidean", 3),
        )

    return make


@pytest.fixture
def plane():
    return immersion(("u", "v"), ("u", "v", "0"), {}, AmbientChart("euclidean", 3))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
