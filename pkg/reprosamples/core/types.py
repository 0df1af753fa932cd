# reprosamples/core/types.py
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Tuple

import numpy as np

from reprosamples.utils.errors import DimensionMismatch, ReproError


@dataclass(frozen=True, order=True)
class ModelSupport:
    """Sorted set of active column indices (0-based inside the library)"""

    indices: Tuple[int, ...] = ()

    def __post_init__(self):
        values = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ReproError(f"support indices must be strictly increasing, got {values}")
        if values and values[0] < 0:
            raise ReproError(f"support indices must be nonnegative, got {values}")
        object.__setattr__(self, "indices", values)

    @classmethod
    def of(cls, indices: Iterable[int], p: Optional[int] = None) -> "ModelSupport":
        """Build a support from any iterable, sorting and deduplicating it"""
        support = cls(tuple(sorted({int(i) for i in indices})))
        if p is not None:
            support.check(p)
        return support

    @classmethod
    def from_one_based(cls, indices: Iterable[int], p: Optional[int] = None) -> "ModelSupport":
        return cls.of((int(i) - 1 for i in indices), p)

    def check(self, p: int, n: Optional[int] = None) -> None:
        if self.indices and self.indices[-1] >= p:
            raise DimensionMismatch(f"support {self.one_based()} exceeds p={p}")
        if n is not None and len(self) >= n:
            raise DimensionMismatch(f"support size {len(self)} must be < n={n}")

    def one_based(self) -> List[int]:
        return [i + 1 for i in self.indices]

    def union(self, other: Iterable[int]) -> "ModelSupport":
        return ModelSupport.of(set(self.indices) | set(other))

    def difference(self, other: Iterable[int]) -> "ModelSupport":
        return ModelSupport.of(set(self.indices) - set(other))

    def intersection(self, other: Iterable[int]) -> "ModelSupport":
        return ModelSupport.of(set(self.indices) & set(other))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, item: object) -> bool:
        return item in self.indices

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.one_based()) + "}"


@dataclass(frozen=True)
class Dataset:
    """The observed response and design, ``y = X beta + sigma u``"""

    y: np.ndarray
    X: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=float).reshape(-1)
        X = np.array(self.X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2:
            raise DimensionMismatch(f"X must be a matrix, got {X.ndim} dimensions")
        if y.shape[0] != X.shape[0]:
            raise DimensionMismatch(f"y has length {y.shape[0]} but X has {X.shape[0]} rows")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(X))):
            raise ReproError("y and X must contain only finite values")
        zero_columns = np.flatnonzero(~X.any(axis=0))
        if zero_columns.size:
            raise ReproError(f"X has all-zero columns: {(zero_columns + 1).tolist()}")
        y.setflags(write=False)
        X.setflags(write=False)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class OrthoBasis:
    """Thin orthonormal factor Q of span(X_tau); the projection is Q Q^T"""

    Q: np.ndarray
    rank: int
    support: Optional[ModelSupport] = None
    rank_deficient: bool = False
    columns: Tuple[int, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    def project(self, v: np.ndarray) -> np.ndarray:
        if self.rank == 0:
            return np.zeros_like(v, dtype=float)
        return self.Q @ (self.Q.T @ v)

    def residual(self, v: np.ndarray) -> np.ndarray:
        return v - self.project(v)
