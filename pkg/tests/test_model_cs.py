import numpy as np
import pytest

from reprosamples.core.linalg import least_squares, ortho_basis
from reprosamples.core.rng import Stream
from reprosamples.core.types import Dataset, ModelSupport
from reprosamples.inference.conditional import conditional_resample, observed_stats
from reprosamples.inference.model_cs import (
    ConditionalPmf,
    confidence_curve,
    estimate_pmf,
    model_confidence_set,
    model_p_value,
    tail_probability,
    tau_hat_constrained,
)
from reprosamples.search.candidates import CandidateSet
from reprosamples.utils.errors import DegenerateResidual, InvalidLevel

A, B, C = ModelSupport((0,)), ModelSupport((1,)), ModelSupport((0, 1))


class TestConditionalSampling:
    def test_empty_model(self, sparse_data):
        stats = observed_stats(sparse_data, ModelSupport())
        np.testing.assert_allclose(stats.a_obs, 0.0)
        assert stats.b_obs == pytest.approx(np.linalg.norm(sparse_data.y))

    def test_response_in_span(self, rng):
        X = rng.standard_normal((10, 3))
        with pytest.raises(DegenerateResidual):
            observed_stats(Dataset(y=2.0 * X[:, 0], X=X), ModelSupport((0,)))

    def test_residual_norm_matches_least_squares(self, sparse_data, tau0):
        stats = observed_stats(sparse_data, tau0)
        _, _, rss = least_squares(sparse_data.X[:, list(tau0)], sparse_data.y)
        assert stats.b_obs**2 == pytest.approx(rss, rel=1e-10)
        assert stats.b_obs**2 + stats.a_obs @ stats.a_obs == pytest.approx(sparse_data.y @ sparse_data.y, rel=1e-8)

    def test_conditioning_identities(self, sparse_data, tau0):
        stats = observed_stats(sparse_data, tau0)
        basis = ortho_basis(sparse_data.X, tau0)
        for j in range(200):
            y_star = conditional_resample(stats, sparse_data.X, Stream(1).child(j))
            np.testing.assert_allclose(basis.project(y_star), stats.a_obs, atol=1e-8 * np.linalg.norm(stats.a_obs))
            assert np.linalg.norm(basis.residual(y_star)) == pytest.approx(stats.b_obs, rel=1e-8)

    def test_zero_residual_returns_fit(self, sparse_data, tau0):
        stats = observed_stats(sparse_data, tau0)
        pinned = type(stats)(a_obs=stats.a_obs, b_obs=0.0, support=tau0)
        np.testing.assert_array_equal(conditional_resample(pinned, sparse_data.X, Stream(2)), stats.a_obs)

    def test_empty_model_draws_uniform_directions(self, sparse_data):
        stats = observed_stats(sparse_data, ModelSupport())
        first = [conditional_resample(stats, sparse_data.X, Stream(3).child(j))[0] / stats.b_obs for j in range(4000)]
        # each coordinate of a uniform point on the sphere in R^n has variance 1/n
        assert abs(np.mean(first)) < 4.0 * np.sqrt(1.0 / sparse_data.n / 4000)


class TestConstrainedEstimator:
    def test_zero_response(self, orthonormal_design):
        assert tau_hat_constrained(np.zeros(20), orthonormal_design, 2) == ModelSupport()

    def test_orthonormal_full_size(self, orthonormal_design):
        y = orthonormal_design @ np.array([1.0, 0.0, -2.0, 0.5])
        assert tau_hat_constrained(y, orthonormal_design, 4) == ModelSupport((0, 2, 3))

    def test_path_fallback_matches_enumeration(self, sparse_data):
        exhaustive = tau_hat_constrained(sparse_data.y, sparse_data.X, 2)
        via_path = tau_hat_constrained(sparse_data.y, sparse_data.X, 2, exhaustive_limit=1)
        assert exhaustive == via_path == ModelSupport((0, 1))


class TestTailProbability:
    def pmf(self, counts, J):
        return ConditionalPmf(support=C, counts=counts, J=J)

    def test_mode(self):
        assert tail_probability(self.pmf({A: 7, B: 3}, 10), A) == 1.0

    def test_absent(self):
        assert tail_probability(self.pmf({A: 7, B: 3}, 10), C) == 0.0

    def test_partial_sum(self):
        assert tail_probability(self.pmf({A: 5, B: 3, C: 2}, 10), B) == pytest.approx(0.5)

    def test_ties_are_included(self):
        assert tail_probability(self.pmf({A: 4, B: 4, C: 2}, 10), A) == pytest.approx(1.0)

    def test_probabilities_sum_to_one(self):
        assert sum(self.pmf({A: 5, B: 3, C: 2}, 10).table.values()) == pytest.approx(1.0)


class TestModelConfidenceSet:
    def test_single_draw(self, sparse_data, tau0, log_messages):
        pmf = estimate_pmf(sparse_data, tau0, 1, Stream(4))
        assert list(pmf.table.values()) == [1.0]
        model_confidence_set(sparse_data, CandidateSet.of([tau0]), 0.95, 1, seed=1)
        assert any("J = 1" in m for m in log_messages)

    def test_pmf_deterministic(self, sparse_data, tau0):
        first = estimate_pmf(sparse_data, tau0, 30, Stream(8))
        second = estimate_pmf(sparse_data, tau0, 30, Stream(8))
        assert first.counts == second.counts

    def test_true_model_concentrates(self, sparse_data, tau0):
        pmf = estimate_pmf(sparse_data, tau0, 100, Stream(9))
        assert pmf.probability(tau0) > 0.5

    def test_contains_truth(self, sparse_data, tau0):
        candidates = CandidateSet.of([A, tau0, ModelSupport((0, 1, 2))])
        mcs = model_confidence_set(sparse_data, candidates, 0.95, 40, seed=5)
        assert tau0 in mcs
        assert set(mcs.models) <= set(candidates.models)
        for entry in mcs.entries:
            assert entry.included == (entry.tail_prob >= 1.0 - 0.95)

    def test_nested_levels(self, sparse_data, tau0):
        candidates = CandidateSet.of([A, B, tau0, ModelSupport((0, 1, 2))])
        mcs = model_confidence_set(sparse_data, candidates, 0.95, 40, seed=5)
        assert set(mcs.at_level(0.90).models) <= set(mcs.models) <= set(mcs.at_level(0.99).models)

    def test_appending_candidates_keeps_earlier_estimates(self, sparse_data, tau0):
        short = model_confidence_set(sparse_data, CandidateSet.of([tau0]), 0.95, 20, seed=5)
        longer = model_confidence_set(sparse_data, CandidateSet.of([tau0, ModelSupport((0, 1, 3))]), 0.95, 20, seed=5)
        assert short.entries[0].tail_prob == longer.entries[[e.support for e in longer.entries].index(tau0)].tail_prob

    def test_added_candidates_keep_other_estimates(self, sparse_data):
        models = [ModelSupport((0, 1, 2)), ModelSupport((0, 3)), ModelSupport((0, 1, 4, 5))]
        before = model_confidence_set(sparse_data, CandidateSet.of(models), 0.95, 15, seed=5)
        after = model_confidence_set(sparse_data, CandidateSet.of(models + [ModelSupport((2,))]), 0.95, 15, seed=5)
        tails = {e.support: e.tail_prob for e in after.entries}
        for entry in before.entries:
            assert tails[entry.support] == entry.tail_prob

    def test_pmf_free_of_nuisance_parameters(self, rng, tau0):
        X = rng.standard_normal((40, 8))
        u = rng.standard_normal(40)
        J = 2000
        tables = []
        for beta, sigma, seed in (((2.0, 1.5), 1.0, 11), ((4.0, -3.0), 0.5, 12)):
            data = Dataset(y=X[:, :2] @ np.array(beta) + sigma * u, X=X)
            tables.append(estimate_pmf(data, tau0, J, Stream(seed)).table)
        atoms = set(tables[0]) | set(tables[1])
        distance = 0.5 * sum(abs(tables[0].get(m, 0.0) - tables[1].get(m, 0.0)) for m in atoms)
        assert distance <= 3.0 * np.sqrt(1.0 / J)

    def test_invalid_level(self, sparse_data, tau0):
        with pytest.raises(InvalidLevel):
            model_confidence_set(sparse_data, CandidateSet.of([tau0]), 1.0, 10, seed=1)

    def test_confidence_curve(self, sparse_data, tau0):
        mcs = model_confidence_set(sparse_data, CandidateSet.of([A, tau0]), 0.95, 20, seed=2)
        curve = confidence_curve(mcs)
        assert list(curve.columns) == ["model", "size", "tail_prob", "entry_level", "included"]
        assert len(curve) == 2
        assert list(curve["entry_level"]) == sorted(curve["entry_level"])

    def test_p_value(self, sparse_data, tau0):
        value = model_p_value(sparse_data, tau0, 20, Stream(3))
        assert 0.0 <= value <= 1.0
