import numpy as np
import pytest

from reprosamples.baseline.bootstrap import BootstrapModelSet, residual_bootstrap_models, trim_models
from reprosamples.core.types import Dataset, ModelSupport
from reprosamples.utils.errors import InvalidConfig, ReproError

A, B, C = ModelSupport((0,)), ModelSupport((0, 1)), ModelSupport((0, 2))


class TestTrimming:
    def test_rarest_models_dropped(self):
        assert trim_models({A: 90, B: 6, C: 4}) == [A, B]

    def test_nothing_to_trim(self):
        assert trim_models({A: 50, B: 50}) == [A, B]

    def test_equal_counts_dropped_in_support_order(self):
        assert trim_models({A: 95, B: 3, C: 3}) == [A, C]

    def test_serialization(self):
        out = BootstrapModelSet(frequency={A: 3, B: 7}, B=10, retained=[B, A])
        assert out.distinct == 2
        assert out.to_dict()["frequency"] == [{"indices": [1, 2], "count": 7}, {"indices": [1], "count": 3}]


class TestResidualBootstrap:
    @pytest.fixture
    def single_signal(self, rng):
        X = rng.standard_normal((40, 6))
        return Dataset(y=3.0 * X[:, 0] + 0.01 * rng.standard_normal(40), X=X)

    def test_recovers_strong_signal(self, single_signal):
        result = residual_bootstrap_models(single_signal, 30, "bic", seed=3)
        assert result.retained[0] == ModelSupport((0,))
        assert sum(result.frequency.values()) + result.failed == 30

    def test_deterministic_across_threads(self, single_signal):
        serial = residual_bootstrap_models(single_signal, 12, "aic", seed=4)
        parallel = residual_bootstrap_models(single_signal, 12, "aic", seed=4, threads=3)
        assert serial.to_dict() == parallel.to_dict()

    def test_invalid_arguments(self, single_signal):
        with pytest.raises(ReproError):
            residual_bootstrap_models(single_signal, 0, "bic", seed=1)
        with pytest.raises(InvalidConfig):
            residual_bootstrap_models(single_signal, 5, "lasso", seed=1)

    def test_frequencies_sorted_in_output(self, sparse_data):
        payload = residual_bootstrap_models(sparse_data, 10, "ebic", seed=2).to_dict()
        counts = [entry["count"] for entry in payload["frequency"]]
        assert counts == sorted(counts, reverse=True)
        assert payload["criterion"] == "ebic"
