# reprosamples/criterion/information.py
import numpy as np
from scipy.special import gammaln

from reprosamples.criterion.base import InformationCriterion
from reprosamples.utils.errors import InvalidConfig


def log_binom(p: int, k: int) -> float:
    return float(gammaln(p + 1) - gammaln(k + 1) - gammaln(p - k + 1))


class AicCriterion(InformationCriterion):
    """Akaike: 2 |tau|"""

    name = "aic"

    def penalty(self, size: int, n: int, p: int) -> float:
        return 2.0 * size


class BicCriterion(InformationCriterion):
    """Schwarz: |tau| log n"""

    name = "bic"

    def penalty(self, size: int, n: int, p: int) -> float:
        return size * np.log(n)


class ExtendedBicCriterion(InformationCriterion):
    """Extended BIC: |tau| log n + 2 zeta log C(p, |tau|)"""

    name = "ebic"

    def __init__(self, zeta: float = 1.0):
        if not 0.0 <= zeta <= 1.0:
            raise InvalidConfig(f"zeta must lie in [0, 1], got {zeta}")
        self.zeta = zeta

    def penalty(self, size: int, n: int, p: int) -> float:
        return size * np.log(n) + 2.0 * self.zeta * log_binom(p, size)
