# reprosamples/simulation/oracle.py
from typing import Optional, Sequence

from loguru import logger
import numpy as np

from reprosamples.search.identifiability import penalized_repro_argmin
from reprosamples.simulation.generator import generate
from reprosamples.simulation.scenario import ScenarioConfig


def oracle_recovery_rate(
    n: int = 50,
    p: int = 10,
    beta: Sequence[float] = (3.0, 2.0, 1.5),
    instances: int = 100,
    lam: Optional[float] = None,
    corr_decay: float = 0.0,
    sigma: float = 1.0,
    seed: int = 2024,
) -> float:
    """
    Share of instances where the repro objective fed the realized error recovers tau0

    Every support is enumerated, so p must stay small.

    Args:
        lam: L0 penalty, defaults to log(n)
    """
    scenario = ScenarioConfig(
        name="oracle", n=n, p=p, beta=tuple(beta), corr_decay=corr_decay, sigma=sigma, reps=instances, seed=seed
    )
    lam = float(np.log(n)) if lam is None else lam
    recovered = 0
    for rep in range(instances):
        data, truth = generate(scenario, rep)
        found = penalized_repro_argmin(data.y, data.X, truth.u_rel, lam)
        recovered += found == truth.tau0
        if found != truth.tau0:
            logger.debug(f"Instance {rep + 1}: recovered {found}, truth {truth.tau0}")
    rate = recovered / instances
    logger.info(f"Oracle recovery: {recovered}/{instances} instances at lambda={lam:.3g}")
    return rate
