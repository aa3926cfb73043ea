import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from recourse import synth
from recourse.data import split
from recourse.predictors import train_reference


@pytest.fixture(scope="session")
def blobs():
    dataset = synth.two_blobs(n=625, seed=11)
    return split(dataset, 0.8, seed=1)


@pytest.fixture(scope="session")
def blobs_predictor(blobs):
    train, _ = blobs
    return train_reference(train, "nearest-centroid", seed=0)


@pytest.fixture(scope="session")
def moons():
    dataset = synth.half_moons(n=625, noise=0.15, seed=7)
    return split(dataset, 0.8, seed=2)


@pytest.fixture(scope="session")
def moons_predictor(moons):
    train, _ = moons
    return train_reference(train, "bagged-stumps", seed=3)


@pytest.fixture(scope="session")
def correlated():
    dataset = synth.correlated_pairs(n=625, seed=5)
    return split(dataset, 0.8, seed=4)


@pytest.fixture(scope="session")
def correlated_predictor(correlated):
    train, _ = correlated
    return train_reference(train, "bagged-stumps", seed=6)


@pytest.fixture()
def rng():
    return np.random.default_rng(123)
