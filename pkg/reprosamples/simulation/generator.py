# reprosamples/simulation/generator.py
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from reprosamples.core.rng import Stream
from reprosamples.core.types import Dataset, ModelSupport
from reprosamples.simulation.scenario import ScenarioConfig
from reprosamples.utils.constants import STREAM_SIMULATION
from reprosamples.utils.errors import ReproError


@dataclass(frozen=True)
class GroundTruth:
    """The generating model, kept alongside each simulated dataset for scoring"""

    tau0: ModelSupport
    beta0: np.ndarray
    sigma0: float
    u_rel: np.ndarray

    def __post_init__(self):
        if np.any(np.asarray(self.beta0) == 0.0):
            raise ReproError("beta0 must not contain zeros")
        if len(self.beta0) != len(self.tau0):
            raise ReproError("beta0 needs one entry per index of tau0")

    def beta_full(self, p: int) -> np.ndarray:
        full = np.zeros(p)
        full[list(self.tau0)] = self.beta0
        return full


def ar1_design(n: int, p: int, rho: float, generator: np.random.Generator) -> np.ndarray:
    """Rows i.i.d. N(0, Sigma) with Sigma_jk = rho^|j-k|, built column by column"""
    Z = generator.standard_normal((n, p))
    X = np.empty((n, p))
    X[:, 0] = Z[:, 0]
    scale = np.sqrt(1.0 - rho * rho)
    for j in range(1, p):
        X[:, j] = rho * X[:, j - 1] + scale * Z[:, j]
    return X


def generate(scenario: ScenarioConfig, rep: int) -> Tuple[Dataset, GroundTruth]:
    """
    Simulate replication ``rep`` of a scenario

    The design is redrawn for every replication and is not standardized.
    """
    generator = Stream(scenario.seed).child(STREAM_SIMULATION, rep).generator()
    X = ar1_design(scenario.n, scenario.p, scenario.corr_decay, generator)
    u_rel = generator.standard_normal(scenario.n)

    tau0 = ModelSupport.of(scenario.tau0, scenario.p)
    beta0 = np.array([scenario.beta_full()[j] for j in tau0])
    y = X[:, list(tau0)] @ beta0 + scenario.sigma * u_rel
    return Dataset(y=y, X=X), GroundTruth(tau0=tau0, beta0=beta0, sigma0=scenario.sigma, u_rel=u_rel)
