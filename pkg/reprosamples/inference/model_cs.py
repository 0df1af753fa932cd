"""Model confidence sets by conditional repro sampling."""

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, List, Optional

from loguru import logger
import numpy as np
import pandas as pd

from reprosamples.core.linalg import rss_of
from reprosamples.core.rng import Stream
from reprosamples.core.types import Dataset, ModelSupport
from reprosamples.inference.conditional import conditional_resample, observed_stats
from reprosamples.search.candidates import CandidateSet
from reprosamples.search.identifiability import best_subset
from reprosamples.search.lasso import adaptive_lasso_path
from reprosamples.service.executor import TaskRunner
from reprosamples.utils.constants import EXHAUSTIVE_LIMIT, STREAM_MODEL_CS
from reprosamples.utils.errors import InvalidLevel, ReproError


def check_level(alpha: float, name: str = "alpha") -> None:
    if not 0.0 < alpha < 1.0:
        raise InvalidLevel(f"{name} must lie in (0, 1), got {alpha}")


@dataclass(frozen=True)
class ConditionalPmf:
    """Monte-Carlo estimate of the model-estimator pmf given the sufficient statistics"""

    support: ModelSupport
    counts: Dict[ModelSupport, int]
    J: int

    @property
    def table(self) -> Dict[ModelSupport, float]:
        return {model: count / self.J for model, count in self.counts.items()}

    def probability(self, model: ModelSupport) -> float:
        return self.counts.get(model, 0) / self.J


@dataclass(frozen=True)
class ModelCsEntry:
    support: ModelSupport
    tail_prob: float
    included: bool
    observed_model: Optional[ModelSupport] = None
    error: Optional[str] = None


@dataclass
class ModelConfidenceSet:
    """Candidate models with their estimated tail probabilities"""

    entries: List[ModelCsEntry] = field(default_factory=list)
    alpha: float = 0.95
    J: int = 200
    seed: int = 0

    @property
    def models(self) -> List[ModelSupport]:
        return [e.support for e in self.entries if e.included]

    def __len__(self) -> int:
        return len(self.models)

    def __contains__(self, model: object) -> bool:
        return model in self.models

    def at_level(self, alpha: float) -> "ModelConfidenceSet":
        """Re-threshold the same tail probabilities at another level"""
        check_level(alpha)
        entries = [
            ModelCsEntry(e.support, e.tail_prob, e.error is None and e.tail_prob >= 1.0 - alpha, e.observed_model, e.error)
            for e in self.entries
        ]
        return ModelConfidenceSet(entries=entries, alpha=alpha, J=self.J, seed=self.seed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "J": self.J,
            "seed": self.seed,
            "models": [
                {
                    "indices": e.support.one_based(),
                    "tail_prob": e.tail_prob,
                    "included": e.included,
                    "observed_model": None if e.observed_model is None else e.observed_model.one_based(),
                    "error": e.error,
                }
                for e in self.entries
            ],
        }


def tau_hat_constrained(y: np.ndarray, X: np.ndarray, k: int, exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> ModelSupport:
    """
    Best model of size at most k

    Exhaustive best subset when C(p, k) is within ``exhaustive_limit``;
    otherwise the largest adaptive-lasso path support of size <= k, with the
    lowest refit RSS breaking ties among distinct supports of that size.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    p = X.shape[1]
    if k <= 0:
        return ModelSupport()
    if comb(p, min(k, p)) <= exhaustive_limit:
        return best_subset(y, X, k, limit=exhaustive_limit)

    path = adaptive_lasso_path(y, X)
    eligible = [s for s in dict.fromkeys(path.supports) if len(s) <= k]
    if not eligible:
        return ModelSupport()
    largest = max(len(s) for s in eligible)
    tied = [s for s in eligible if len(s) == largest]
    if len(tied) == 1:
        return tied[0]
    return min(tied, key=lambda s: (rss_of(X, y, s), s.indices))


def estimate_pmf(
    data: Dataset,
    tau_b: ModelSupport,
    J: int,
    stream: Stream,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> ConditionalPmf:
    """
    Empirical pmf of the constrained estimator over J conditional resamples

    Draw j uses substream ``stream.child(j)``.
    """
    if J < 1:
        raise ReproError(f"J must be >= 1, got {J}")
    stats = observed_stats(data, tau_b)
    counts: Counter = Counter()
    for j in range(J):
        y_star = conditional_resample(stats, data.X, stream.child(j))
        counts[tau_hat_constrained(y_star, data.X, len(tau_b), exhaustive_limit)] += 1
    return ConditionalPmf(support=tau_b, counts=dict(counts), J=J)


def tail_probability(pmf: ConditionalPmf, observed_model: ModelSupport) -> float:
    """Total mass of the atoms no more likely than the observed model"""
    reference = pmf.counts.get(observed_model, 0)
    if reference == 0:
        return 0.0
    return sum(c for c in pmf.counts.values() if c <= reference) / pmf.J


def model_p_value(
    data: Dataset,
    tau: ModelSupport,
    J: int,
    stream: Stream,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> float:
    """Estimated tail probability of the observed estimate under H0: tau0 = tau"""
    pmf = estimate_pmf(data, tau, J, stream, exhaustive_limit)
    observed = tau_hat_constrained(data.y, data.X, len(tau), exhaustive_limit)
    return tail_probability(pmf, observed)


def model_stream(seed: int, tau_b: ModelSupport) -> Stream:
    """Substream of candidate tau_b, addressed by its size and indices"""
    return Stream(seed).child(STREAM_MODEL_CS, len(tau_b), *tau_b.indices)


def _evaluate(data: Dataset, tau_b: ModelSupport, alpha: float, J: int, seed: int, exhaustive_limit: int) -> ModelCsEntry:
    stream = model_stream(seed, tau_b)
    try:
        pmf = estimate_pmf(data, tau_b, J, stream, exhaustive_limit)
        observed = tau_hat_constrained(data.y, data.X, len(tau_b), exhaustive_limit)
    except ReproError as e:
        logger.warning(f"Model {tau_b} excluded: {e}")
        return ModelCsEntry(tau_b, 0.0, False, None, str(e))

    tail = tail_probability(pmf, observed)
    logger.debug(f"Model {tau_b}: observed estimate {observed}, tail probability {tail:.3f}")
    return ModelCsEntry(tau_b, tail, tail >= 1.0 - alpha, observed)


def model_confidence_set(
    data: Dataset,
    candidates: CandidateSet,
    alpha: float,
    J: int,
    seed: int,
    threads: int = 1,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> ModelConfidenceSet:
    """
    Level-alpha confidence set for the true model within the candidate set

    Each candidate draws from a substream addressed by its own support, so adding
    or removing candidates leaves the estimates of the others unchanged.

    Args:
        data: observed data
        candidates: candidate models
        alpha: coverage level in (0, 1)
        J: conditional resamples per candidate
        seed: base seed
        threads: worker count
        exhaustive_limit: best-subset enumeration guard for the constrained estimator
    """
    check_level(alpha)
    if len(candidates) == 0:
        raise ReproError("the candidate set is empty")
    if J == 1:
        logger.warning("J = 1: every conditional pmf is a single atom with probability 1")

    logger.info(f"Model confidence set: {len(candidates)} candidates, J={J}, alpha={alpha}")
    entries = TaskRunner.map(
        lambda tau_b: _evaluate(data, tau_b, alpha, J, seed, exhaustive_limit),
        candidates.models,
        threads=threads,
        label="candidate models",
    )
    result = ModelConfidenceSet(entries=entries, alpha=alpha, J=J, seed=seed)
    logger.info(f"{len(result)} of {len(candidates)} candidate models included")
    return result


def confidence_curve(mcs: ModelConfidenceSet) -> pd.DataFrame:
    """Smallest level at which each candidate enters the confidence set"""
    rows = [
        {
            "model": str(e.support),
            "size": len(e.support),
            "tail_prob": e.tail_prob,
            "entry_level": 1.0 - e.tail_prob if e.error is None else np.nan,
            "included": e.included,
        }
        for e in mcs.entries
    ]
    frame = pd.DataFrame(rows, columns=["model", "size", "tail_prob", "entry_level", "included"])
    return frame.sort_values(["entry_level", "size", "model"], kind="mergesort").reset_index(drop=True)
