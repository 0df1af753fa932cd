# reprosamples/inference/regions.py
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from reprosamples.core.types import ModelSupport
from reprosamples.utils.errors import DimensionMismatch


@dataclass(frozen=True)
class EllipsoidRegion:
    """{beta_Lambda: (beta_A - center)^T shape (beta_A - center) <= radius2, beta_pinned = 0}

    ``active`` is Lambda intersected with the model, ``pinned`` is Lambda minus
    the model; both hold column indices of the full design.
    """

    support: ModelSupport
    lambda_set: Tuple[int, ...]
    active: Tuple[int, ...]
    center: np.ndarray
    shape: np.ndarray
    radius2: float
    pinned: Tuple[int, ...]

    def _positions(self, indices: Sequence[int]) -> List[int]:
        lookup = {j: k for k, j in enumerate(self.lambda_set)}
        return [lookup[j] for j in indices]

    def quadratic(self, beta_lambda: np.ndarray) -> float:
        """(beta_A - center)^T shape (beta_A - center), or inf when a pinned coordinate is nonzero"""
        beta_lambda = np.asarray(beta_lambda, dtype=float).reshape(-1)
        if beta_lambda.shape[0] != len(self.lambda_set):
            raise DimensionMismatch(f"expected {len(self.lambda_set)} coordinates, got {beta_lambda.shape[0]}")
        if self.pinned and np.any(beta_lambda[self._positions(self.pinned)] != 0.0):
            return float("inf")
        if not self.active:
            return 0.0
        delta = beta_lambda[self._positions(self.active)] - self.center
        return float(delta @ self.shape @ delta)

    def contains(self, beta_lambda: np.ndarray) -> bool:
        return self.quadratic(beta_lambda) <= self.radius2

    @property
    def is_atom(self) -> bool:
        return not self.active

    def to_dict(self) -> Dict[str, Any]:
        return {
            "support": self.support.one_based(),
            "active": [j + 1 for j in self.active],
            "center": self.center.tolist(),
            "shape": self.shape.reshape(-1).tolist(),
            "radius2": self.radius2,
            "pinned": [j + 1 for j in self.pinned],
        }


@dataclass
class RegionUnion:
    """Union of per-model regions for the coefficients indexed by ``lambda_set``"""

    regions: List[EllipsoidRegion] = field(default_factory=list)
    alpha: float = 0.95
    lambda_set: Tuple[int, ...] = ()

    @property
    def includes_zero_atom(self) -> bool:
        return any(r.is_atom for r in self.regions)

    @property
    def shrunk_proportion(self) -> float:
        """Fraction of Lambda pinned to exactly zero in every region"""
        if not self.lambda_set or not self.regions:
            return 0.0
        common = set(self.lambda_set)
        for region in self.regions:
            common &= set(region.pinned)
        return len(common) / len(self.lambda_set)

    def contains(self, beta_lambda: np.ndarray) -> bool:
        return any(r.contains(beta_lambda) for r in self.regions)

    def __len__(self) -> int:
        return len(self.regions)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "lambda_set": [j + 1 for j in self.lambda_set],
            "includes_zero_atom": self.includes_zero_atom,
            "shrunk_proportion": self.shrunk_proportion,
            "regions": [r.to_dict() for r in self.regions],
        }


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint sorted closed intervals plus an optional isolated point at zero"""

    intervals: Tuple[Tuple[float, float], ...] = ()
    zero_atom: bool = False

    @classmethod
    def from_pieces(cls, pieces: Iterable[Tuple[float, float]], zero_atom: bool = False) -> "IntervalUnion":
        """Merge overlapping pieces into canonical form"""
        merged: List[List[float]] = []
        for lo, hi in sorted((float(a), float(b)) for a, b in pieces):
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        intervals = tuple((lo, hi) for lo, hi in merged)
        covered = any(lo <= 0.0 <= hi for lo, hi in intervals)
        return cls(intervals=intervals, zero_atom=zero_atom and not covered)

    @property
    def width(self) -> float:
        """Total length of the union; the zero atom has measure zero"""
        return float(sum(hi - lo for lo, hi in self.intervals))

    def contains(self, value: float) -> bool:
        if self.zero_atom and value == 0.0:
            return True
        return any(lo <= value <= hi for lo, hi in self.intervals)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "intervals": [[lo, hi] for lo, hi in self.intervals],
            "zero_atom": self.zero_atom,
            "width": self.width,
        }
