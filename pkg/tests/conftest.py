import numpy as np
import pytest

from geolab.surfaces import make_mk, make_sphere
from geolab.geodesics import sample_great_circle, sample_level_circle
from geolab.networks import GeodesicNetwork


@pytest.fixture(scope="session")
def sphere():
    return make_sphere()


@pytest.fixture(scope="session")
def mk4():
    return make_mk(4.0, 1.0)


@pytest.fixture(scope="session")
def mk16():
    return make_mk(16.0, 1.0)


@pytest.fixture(scope="session")
def mk_mu2():
    return make_mk(9.0, 2.0)


@pytest.fixture(scope="session")
def equator_mk4(mk4):
    return sample_level_circle(mk4, 0.0)


@pytest.fixture(scope="session")
def great_circle(sphere):
    return sample_great_circle(sphere, [1, 0, 0], [0, 1, 0])


@pytest.fixture(scope="session")
def two_circles_network(sphere):
    curves = [
        sample_great_circle(sphere, [1, 0, 0], [0, 1, 0]),
        sample_great_circle(sphere, [1, 0, 0], [0, 0, 1]),
    ]
    return GeodesicNetwork.build(sphere, curves, clustering_radius=0.01)
