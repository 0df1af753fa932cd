# reprosamples/core/rng.py
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from reprosamples.utils.errors import InvalidConfig


@dataclass(frozen=True)
class Stream:
    """Counter-based random stream addressed by (seed, substream path)

    The same address always yields the same numbers, whatever thread or order
    it is consumed in.
    """

    seed: int
    path: Tuple[int, ...] = ()

    def child(self, *ids: int) -> "Stream":
        return Stream(self.seed, self.path + tuple(int(i) for i in ids))

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(entropy=int(self.seed), spawn_key=self.path)
        return np.random.Generator(np.random.Philox(sequence))


def sample_gaussian(n: int, stream: Stream) -> np.ndarray:
    """n i.i.d. standard normals drawn from ``stream``"""
    if n < 1:
        raise InvalidConfig(f"n must be >= 1, got {n}")
    return stream.generator().standard_normal(n)
