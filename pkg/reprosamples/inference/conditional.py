# reprosamples/inference/conditional.py
from dataclasses import dataclass
from typing import Optional

import numpy as np

from reprosamples.core.linalg import ortho_basis
from reprosamples.core.rng import Stream
from reprosamples.core.types import Dataset, ModelSupport, OrthoBasis
from reprosamples.utils.constants import DEGENERATE_TOL
from reprosamples.utils.errors import DegenerateResidual, DimensionMismatch

MAX_REDRAWS = 100


@dataclass(frozen=True)
class ConditionalStats:
    """Sufficient statistics (H_tau y, ||(I - H_tau) y||) of a model"""

    a_obs: np.ndarray
    b_obs: float
    support: ModelSupport
    basis: Optional[OrthoBasis] = None


def observed_stats(data: Dataset, tau: ModelSupport) -> ConditionalStats:
    """
    Project the observed response on span(X_tau)

    Raises:
        DegenerateResidual: when y lies in span(X_tau)
    """
    tau.check(data.p, data.n)
    basis = ortho_basis(data.X, tau)
    a_obs = basis.project(data.y)
    b_obs = float(np.linalg.norm(data.y - a_obs))
    if b_obs < DEGENERATE_TOL:
        raise DegenerateResidual(f"y lies in the span of model {tau}")
    return ConditionalStats(a_obs=a_obs, b_obs=b_obs, support=tau, basis=basis)


def conditional_resample(stats: ConditionalStats, X: np.ndarray, stream: Stream) -> np.ndarray:
    """
    Draw y* on the sphere fixed by the sufficient statistics

    y* = a_obs + b_obs (I - H_tau) u* / ||(I - H_tau) u*||, with u* ~ N(0, I_n);
    a draw whose residual vanishes is replaced by the next one from the stream.
    """
    basis = stats.basis if stats.basis is not None else ortho_basis(X, stats.support)
    n = basis.n
    if stats.a_obs.shape[0] != n:
        raise DimensionMismatch("a_obs length does not match the design")
    if stats.b_obs == 0.0:
        return stats.a_obs.copy()

    generator = stream.generator()
    for _ in range(MAX_REDRAWS):
        resid = basis.residual(generator.standard_normal(n))
        norm = float(np.linalg.norm(resid))
        if norm >= DEGENERATE_TOL:
            return stats.a_obs + stats.b_obs * resid / norm
    raise DegenerateResidual(f"orthogonal complement of model {stats.support} is numerically empty")
