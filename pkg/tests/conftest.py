import os

import hypothesis
from loguru import logger
import numpy as np
import pytest

from reprosamples.core.types import Dataset, ModelSupport

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=15, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=100, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def sparse_data(rng):
    """n=40, p=8, y = 2 x1 + 1.5 x2 + u"""
    X = rng.standard_normal((40, 8))
    y = 2.0 * X[:, 0] + 1.5 * X[:, 1] + rng.standard_normal(40)
    return Dataset(y=y, X=X)


@pytest.fixture
def tau0():
    return ModelSupport((0, 1))


@pytest.fixture
def orthonormal_design(rng):
    Q, _ = np.linalg.qr(rng.standard_normal((20, 4)))
    return Q


@pytest.fixture
def log_messages():
    messages = []
    handler_id = logger.add(lambda m: messages.append(m.record["message"]), level="DEBUG")
    yield messages
    logger.remove(handler_id)
