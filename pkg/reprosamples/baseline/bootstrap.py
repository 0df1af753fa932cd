"""Residual-bootstrap model "confidence" sets, the comparison method for model inference."""

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

from loguru import logger
import numpy as np

from reprosamples.core.linalg import least_squares
from reprosamples.core.rng import Stream
from reprosamples.core.types import Dataset, ModelSupport
from reprosamples.criterion.base import SelectionCriterion
from reprosamples.criterion.factory import CriterionFactory
from reprosamples.search.candidates import default_max_support
from reprosamples.search.lasso import adaptive_lasso_path
from reprosamples.service.executor import TaskRunner
from reprosamples.utils.constants import STREAM_BOOTSTRAP
from reprosamples.utils.errors import ReproError

TRIM_FRACTION = 0.05


@dataclass
class BootstrapModelSet:
    """Bootstrap model frequencies and the set left after trimming the rarest models"""

    frequency: Dict[ModelSupport, int] = field(default_factory=dict)
    B: int = 0
    retained: List[ModelSupport] = field(default_factory=list)
    criterion: str = "bic"
    failed: int = 0

    @property
    def distinct(self) -> int:
        """Number of different models selected over all replicates"""
        return len(self.frequency)

    def __len__(self) -> int:
        return len(self.retained)

    def __contains__(self, model: object) -> bool:
        return model in self.retained

    def to_dict(self) -> Dict[str, Any]:
        ordered = sorted(self.frequency.items(), key=lambda kv: (-kv[1], kv[0].indices))
        return {
            "criterion": self.criterion,
            "B": self.B,
            "failed": self.failed,
            "frequency": [{"indices": m.one_based(), "count": c} for m, c in ordered],
            "retained": [m.one_based() for m in self.retained],
        }


def trim_models(frequency: Dict[ModelSupport, int], fraction: float = TRIM_FRACTION) -> List[ModelSupport]:
    """
    Drop the least frequent models while the dropped total stays within ``fraction``

    Models of equal frequency are dropped in lexicographic support order.

    Returns:
        the retained models, most frequent first
    """
    total = sum(frequency.values())
    budget = fraction * total
    removed = 0
    trimmed = set()
    for model, count in sorted(frequency.items(), key=lambda kv: (kv[1], kv[0].indices)):
        if removed + count > budget:
            break
        removed += count
        trimmed.add(model)
    kept = [m for m in frequency if m not in trimmed]
    return sorted(kept, key=lambda m: (-frequency[m], m.indices))


def select_model(
    y: np.ndarray,
    X: np.ndarray,
    criterion: SelectionCriterion,
    stream: Stream,
    max_support: Optional[int] = None,
) -> ModelSupport:
    """Adaptive lasso path tuned by ``criterion``"""
    path = adaptive_lasso_path(y, X)
    index = criterion.select(path, y, X, max_support=max_support, stream=stream)
    return path.supports[index]


def residual_bootstrap_models(
    data: Dataset,
    B: int,
    criterion: Union[str, SelectionCriterion],
    seed: int,
    threads: int = 1,
    max_support: Optional[int] = None,
) -> BootstrapModelSet:
    """
    Residual bootstrap of the tuned adaptive lasso

    Args:
        data: observed data
        B: bootstrap replicates
        criterion: tuning rule name (aic, bic, cv, ebic) or instance
        seed: base seed; replicate b uses substream (seed, bootstrap, b)
        threads: worker count
        max_support: supports above this are never selected

    Returns:
        frequencies over replicates and the trimmed set
    """
    if B < 1:
        raise ReproError(f"B must be >= 1, got {B}")
    rule = CriterionFactory.get_criterion(criterion) if isinstance(criterion, str) else criterion
    max_support = default_max_support(data.n) if max_support is None else max_support
    base = Stream(seed).child(STREAM_BOOTSTRAP)

    selected = select_model(data.y, data.X, rule, base.child(B + 1), max_support)
    _, fitted, _ = least_squares(data.X[:, list(selected)], data.y)
    residuals = data.y - fitted
    residuals = residuals - residuals.mean()
    logger.info(f"Residual bootstrap ({rule.name}): base model {selected}, B={B}")

    def replicate(b: int) -> Optional[ModelSupport]:
        stream = base.child(b)
        draw = stream.generator().integers(0, data.n, data.n)
        try:
            return select_model(fitted + residuals[draw], data.X, rule, stream.child(0), max_support)
        except ReproError as e:
            logger.warning(f"Bootstrap replicate {b + 1} skipped: {e}")
            return None

    results = TaskRunner.map(replicate, range(B), threads=threads, label="bootstrap replicates")
    frequency: Counter = Counter(m for m in results if m is not None)
    failed = sum(m is None for m in results)

    out = BootstrapModelSet(
        frequency=dict(frequency),
        B=B,
        retained=trim_models(dict(frequency)),
        criterion=rule.name,
        failed=failed,
    )
    logger.info(f"Bootstrap {rule.name}: {out.distinct} distinct models, {len(out)} retained")
    return out
