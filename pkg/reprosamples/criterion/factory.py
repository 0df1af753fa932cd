# reprosamples/criterion/factory.py
from typing import Dict, List

from reprosamples.criterion.base import SelectionCriterion
from reprosamples.criterion.cross_validation import CrossValidationCriterion
from reprosamples.criterion.information import AicCriterion, BicCriterion, ExtendedBicCriterion
from reprosamples.utils.errors import InvalidConfig


class CriterionFactory:
    """Factory for registering and retrieving tuning criteria by name"""

    _criteria: Dict[str, SelectionCriterion] = {}

    @classmethod
    def register_criterion(cls, name: str, criterion: SelectionCriterion) -> None:
        """
        Register a criterion under a name

        Args:
            name: lookup key, case insensitive
            criterion: the criterion instance
        """
        cls._criteria[name.lower()] = criterion

    @classmethod
    def get_criterion(cls, name: str) -> SelectionCriterion:
        """
        Get the criterion registered under ``name``

        Raises:
            InvalidConfig: for an unknown name, listing the valid ones
        """
        if not cls._criteria:
            cls.initialize_default_criteria()
        try:
            return cls._criteria[name.lower()]
        except KeyError:
            raise InvalidConfig(f"unknown criterion {name!r}; choose from {', '.join(cls.names())}") from None

    @classmethod
    def names(cls) -> List[str]:
        if not cls._criteria:
            cls.initialize_default_criteria()
        return sorted(cls._criteria)

    @classmethod
    def initialize_default_criteria(cls) -> None:
        """Register AIC, BIC, extended BIC (zeta = 1) and 5-fold CV"""
        cls.register_criterion("aic", AicCriterion())
        cls.register_criterion("bic", BicCriterion())
        cls.register_criterion("ebic", ExtendedBicCriterion(1.0))
        cls.register_criterion("cv", CrossValidationCriterion(folds=5))
