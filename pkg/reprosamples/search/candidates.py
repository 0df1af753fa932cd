"""Search for candidate models with repro copies of the error vector."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from loguru import logger
import numpy as np

from reprosamples.core.rng import Stream, sample_gaussian
from reprosamples.core.types import Dataset, ModelSupport
from reprosamples.search.ebic import ebic_window
from reprosamples.search.lasso import LassoPath, adaptive_lasso_path
from reprosamples.service.executor import TaskRunner
from reprosamples.utils.config import default_seed, search_defaults
from reprosamples.utils.constants import STREAM_SEARCH
from reprosamples.utils.errors import InvalidConfig, ReproError

MODES = ("penalized", "constrained")
SURROGATES = ("adaptive-lasso",)


def default_max_support(n: int) -> int:
    return max(1, min(n - 5, n // 2))


@dataclass(frozen=True)
class SearchConfig:
    """Settings of the candidate search"""

    d: int = 1000
    lambda_grid: Optional[Tuple[float, ...]] = None
    zeta_endpoints: Tuple[float, float] = (0.0, 1.0)
    surrogate: str = "adaptive-lasso"
    mode: str = "penalized"
    k_max: Optional[int] = None
    max_support: Optional[int] = None
    seed: int = 0
    n_lambda: int = 100
    lambda_min_ratio: float = 1e-3
    max_iter: int = 10000
    tol: float = 1e-10

    @classmethod
    def from_config(cls, **overrides: Any) -> "SearchConfig":
        """Build from the active YAML configuration, with explicit overrides winning"""
        values = search_defaults()
        values["seed"] = default_seed()
        values.update({k: v for k, v in overrides.items() if v is not None})
        known = set(cls.__dataclass_fields__)
        return cls(**{k: v for k, v in values.items() if k in known})

    def resolved_max_support(self, n: int) -> int:
        return self.max_support if self.max_support is not None else default_max_support(n)

    def validate(self, n: int) -> None:
        if self.d < 1:
            raise InvalidConfig(f"d must be >= 1, got {self.d}")
        if self.mode not in MODES:
            raise InvalidConfig(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.surrogate not in SURROGATES:
            raise InvalidConfig(f"surrogate must be one of {SURROGATES}, got {self.surrogate!r}")
        if self.lambda_grid is not None:
            grid = np.asarray(self.lambda_grid, dtype=float)
            if grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) >= 0):
                raise InvalidConfig("lambda grid must be positive and strictly decreasing")
        if self.resolved_max_support(n) >= n:
            raise InvalidConfig(f"max_support must be < n={n}")
        if self.k_max is not None and not 1 <= self.k_max < n:
            raise InvalidConfig(f"k_max must lie in [1, n), got {self.k_max}")
        lo, hi = self.zeta_endpoints
        if not 0.0 <= lo <= 1.0 or not 0.0 <= hi <= 1.0:
            raise InvalidConfig(f"zeta endpoints must lie in [0, 1], got {self.zeta_endpoints}")


@dataclass
class CandidateSet:
    """Distinct model supports recovered by the search, with hit counts"""

    models: List[ModelSupport] = field(default_factory=list)
    hits: Dict[ModelSupport, int] = field(default_factory=dict)
    d_used: int = 0
    failed: int = 0
    provenance: Dict[ModelSupport, int] = field(default_factory=dict)

    @classmethod
    def of(cls, models: Sequence[ModelSupport], d_used: int = 0) -> "CandidateSet":
        """A candidate set with one hit per listed model"""
        out = cls(d_used=d_used)
        for model in models:
            out.add(model, 0)
        return out

    def add(self, model: ModelSupport, copy_index: int, count: int = 1) -> None:
        if model not in self.hits:
            self.hits[model] = 0
            self.provenance[model] = copy_index
            self.models.append(model)
            self.models.sort(key=lambda m: (len(m), m.indices))
        self.hits[model] += count
        self.provenance[model] = min(self.provenance[model], copy_index)

    def merge(self, other: "CandidateSet") -> "CandidateSet":
        """Union with hit counts added; associative and order independent"""
        out = CandidateSet(d_used=self.d_used + other.d_used, failed=self.failed + other.failed)
        for source in (self, other):
            for model in source.models:
                out.add(model, source.provenance[model], source.hits[model])
        return out

    def restrict(self, keep: Sequence[ModelSupport]) -> "CandidateSet":
        """The sub-collection of models listed in ``keep``"""
        wanted = set(keep)
        out = CandidateSet(d_used=self.d_used, failed=self.failed)
        for model in self.models:
            if model in wanted:
                out.add(model, self.provenance[model], self.hits[model])
        return out

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self) -> Iterator[ModelSupport]:
        return iter(self.models)

    def __contains__(self, model: object) -> bool:
        return model in self.hits

    def to_dict(self) -> Dict[str, Any]:
        return {
            "models": [m.one_based() for m in self.models],
            "hits": [self.hits[m] for m in self.models],
            "first_hit": [self.provenance[m] + 1 for m in self.models],
            "d": self.d_used,
            "failed": self.failed,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any], p: Optional[int] = None) -> "CandidateSet":
        models = payload["models"]
        hits = payload.get("hits") or [1] * len(models)
        first = payload.get("first_hit") or [1] * len(models)
        out = cls(d_used=int(payload.get("d", 0)), failed=int(payload.get("failed", 0)))
        for indices, count, origin in zip(models, hits, first):
            out.add(ModelSupport.from_one_based(indices, p), int(origin) - 1, int(count))
        return out


def constrained_supports(path: LassoPath, k_max: int, max_support: int) -> List[ModelSupport]:
    """For each k <= k_max the largest path support of size <= k, ties toward smaller lambda"""
    supports = [s for s in path.supports if len(s) <= max_support]
    chosen: List[ModelSupport] = []
    for k in range(1, k_max + 1):
        best: Optional[ModelSupport] = None
        for support in supports:
            if len(support) <= k and (best is None or len(support) >= len(best)):
                best = support
        if best is not None and len(best) > 0 and best not in chosen:
            chosen.append(best)
    return chosen


def search_copy(data: Dataset, config: SearchConfig, b: int) -> List[ModelSupport]:
    """Models recovered from repro copy ``b`` (0-based)"""
    u_star = sample_gaussian(data.n, Stream(config.seed).child(STREAM_SEARCH, b))
    path = adaptive_lasso_path(
        data.y,
        data.X,
        unpenalized=u_star,
        lambda_grid=config.lambda_grid,
        n_lambda=config.n_lambda,
        lambda_min_ratio=config.lambda_min_ratio,
        max_iter=config.max_iter,
        tol=config.tol,
    )
    max_support = config.resolved_max_support(data.n)
    if config.mode == "constrained":
        return constrained_supports(path, config.k_max or max_support, max_support)
    return ebic_window(path, data.y, data.X, u_star, config.zeta_endpoints, max_support)


def search_candidates(data: Dataset, config: SearchConfig, threads: int = 1) -> CandidateSet:
    """
    Collect candidate models over d repro copies

    Copy b always draws from substream (seed, search, b), so a run with more
    copies extends a run with fewer.

    Args:
        data: observed data
        config: search settings
        threads: worker count

    Returns:
        CandidateSet with hit counts and first-hit copy indices
    """
    config.validate(data.n)
    logger.info(f"Searching candidates: n={data.n}, p={data.p}, d={config.d}, mode={config.mode}")

    def run(b: int) -> Optional[List[ModelSupport]]:
        try:
            return search_copy(data, config, b)
        except ReproError as e:
            logger.warning(f"Repro copy {b + 1} skipped: {e}")
            return None

    results = TaskRunner.map(run, range(config.d), threads=threads, label="repro copies")

    candidates = CandidateSet(d_used=config.d)
    for b, supports in enumerate(results):
        if supports is None:
            candidates.failed += 1
            continue
        for support in supports:
            candidates.add(support, b)

    logger.info(f"Found {len(candidates)} candidate models ({candidates.failed} copies failed)")
    return candidates
