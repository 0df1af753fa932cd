import numpy as np
import pytest

from reprosamples.core.rng import Stream, sample_gaussian
from reprosamples.core.types import Dataset, ModelSupport
from reprosamples.criterion.factory import CriterionFactory
from reprosamples.criterion.information import BicCriterion, ExtendedBicCriterion, log_binom
from reprosamples.search.candidates import CandidateSet, SearchConfig, constrained_supports, search_candidates
from reprosamples.search.ebic import ebic_window
from reprosamples.search.identifiability import best_subset, c_min, penalized_repro_argmin
from reprosamples.search.lasso import LassoPath, adaptive_lasso_path, kkt_violation
from reprosamples.utils.errors import InvalidConfig, TooLarge


def soft_threshold(z, lam):
    return np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)


class TestAdaptiveLassoPath:
    def test_orthonormal_design_soft_thresholds(self, orthonormal_design, rng):
        X = orthonormal_design
        y = X @ np.array([3.0, -2.0, 0.5, 0.0]) + 0.1 * rng.standard_normal(X.shape[0])
        z = X.T @ y
        grid = np.array([4.0, 2.5, 1.0, 0.3, 0.01])
        path = adaptive_lasso_path(y, X, lambda_grid=grid, weights=np.ones(4))
        for k, lam in enumerate(grid):
            np.testing.assert_allclose(path.coefs[:, k], soft_threshold(z, lam), atol=1e-6)
            assert path.supports[k] == ModelSupport(tuple(np.flatnonzero(np.abs(z) > lam)))

    def test_matches_long_run_coordinate_descent(self):
        rng = np.random.default_rng(12)
        X = rng.standard_normal((20, 6))
        y = X[:, :2] @ np.array([2.0, -1.0]) + 0.5 * rng.standard_normal(20)
        u = rng.standard_normal(20)
        w = np.array([1.0, 0.5, 2.0, 1.5, 1.0, 3.0])
        grid = np.geomspace(20.0, 0.05, 12)
        path = adaptive_lasso_path(y, X, unpenalized=u, lambda_grid=grid, weights=w)

        e = u / np.linalg.norm(u)
        y_t, X_t = y - e * (e @ y), X - np.outer(e, e @ X)
        norms = np.sum(X_t * X_t, axis=0)
        beta = np.zeros(6)
        for k, lam in enumerate(grid):
            for _ in range(100_000):
                previous = beta.copy()
                for j in range(6):
                    partial = X_t[:, j] @ (y_t - X_t @ beta) + norms[j] * beta[j]
                    beta[j] = soft_threshold(partial, lam * w[j]) / norms[j]
                if np.max(np.abs(beta - previous)) < 1e-12:
                    break
            np.testing.assert_allclose(path.coefs[:, k], beta, atol=1e-7)
            assert path.supports[k] == ModelSupport(tuple(np.flatnonzero(beta)))

    def test_lambda_above_max_is_empty(self, sparse_data):
        path = adaptive_lasso_path(sparse_data.y, sparse_data.X, n_lambda=10)
        assert path.supports[0] == ModelSupport()
        big = adaptive_lasso_path(sparse_data.y, sparse_data.X, lambda_grid=[path.lambdas[0] * 10.0])
        assert big.supports[0] == ModelSupport()

    def test_kkt_with_repro_column(self, sparse_data):
        u = sample_gaussian(sparse_data.n, Stream(5))
        path = adaptive_lasso_path(sparse_data.y, sparse_data.X, unpenalized=u, n_lambda=30)
        assert np.all(kkt_violation(path, sparse_data.y, sparse_data.X, u) <= 1e-6)
        assert path.sigmas is not None and path.sigmas.shape == (30,)

    def test_repro_column_not_counted(self, sparse_data):
        u = sample_gaussian(sparse_data.n, Stream(6))
        path = adaptive_lasso_path(sparse_data.y, sparse_data.X, unpenalized=u, n_lambda=20)
        assert path.coefs.shape == (sparse_data.p, 20)

    def test_invalid_grid(self, sparse_data):
        with pytest.raises(InvalidConfig):
            adaptive_lasso_path(sparse_data.y, sparse_data.X, lambda_grid=[1.0, 2.0])


def manual_path(supports, p):
    coefs = np.zeros((p, len(supports)))
    for k, support in enumerate(supports):
        coefs[list(support), k] = 1.0
    return LassoPath(lambdas=np.geomspace(10.0, 1.0, len(supports)), coefs=coefs, weights=np.ones(p))


class TestCriteria:
    def test_log_binom(self):
        assert log_binom(5, 2) == pytest.approx(np.log(10.0))
        assert log_binom(7, 7) == pytest.approx(0.0, abs=1e-12)

    def test_zeta_zero_is_bic(self, sparse_data):
        supports = [ModelSupport(), ModelSupport((0,)), ModelSupport((0, 1)), ModelSupport((0, 1, 4)), ModelSupport((0, 1, 4, 6))]
        path = manual_path(supports, sparse_data.p)
        ebic = ExtendedBicCriterion(0.0).scores(path, sparse_data.y, sparse_data.X)
        bic = BicCriterion().scores(path, sparse_data.y, sparse_data.X)
        np.testing.assert_allclose(ebic, bic)
        n = sparse_data.n
        rss = float(np.sum((sparse_data.y - sparse_data.X[:, :2] @ np.linalg.lstsq(sparse_data.X[:, :2], sparse_data.y, rcond=None)[0]) ** 2))
        assert bic[2] == pytest.approx(n * np.log(rss / n) + 2 * np.log(n))

    def test_factory_names(self):
        assert CriterionFactory.names() == ["aic", "bic", "cv", "ebic"]
        with pytest.raises(InvalidConfig, match="aic"):
            CriterionFactory.get_criterion("gcv")

    def test_cross_validation_selects_an_index(self, sparse_data):
        path = adaptive_lasso_path(sparse_data.y, sparse_data.X, n_lambda=15)
        index = CriterionFactory.get_criterion("cv").select(path, sparse_data.y, sparse_data.X, stream=Stream(1))
        assert 0 <= index < len(path)


class TestEbicWindow:
    def test_single_point_path(self, sparse_data):
        path = manual_path([ModelSupport((0,))], sparse_data.p)
        assert ebic_window(path, sparse_data.y, sparse_data.X) == [ModelSupport((0,))]

    def test_full_support_ignores_zeta(self, rng):
        X = rng.standard_normal((30, 3))
        y = X @ np.array([1.0, 2.0, 3.0]) + rng.standard_normal(30)
        path = manual_path([ModelSupport((0, 1, 2))], 3)
        assert ebic_window(path, y, X, zeta_endpoints=(0.0, 1.0)) == [ModelSupport((0, 1, 2))]

    def test_window_covers_both_minimizers(self, sparse_data):
        supports = [ModelSupport(), ModelSupport((0,)), ModelSupport((0, 1)), ModelSupport((0, 1, 5))]
        path = manual_path(supports, sparse_data.p)
        window = ebic_window(path, sparse_data.y, sparse_data.X)
        assert ModelSupport((0, 1)) in window
        assert ModelSupport() not in window


class TestCandidateSearch:
    def config(self, **overrides):
        values = dict(d=6, seed=17, n_lambda=40)
        values.update(overrides)
        return SearchConfig(**values)

    def test_finds_true_model(self, sparse_data, tau0):
        candidates = search_candidates(sparse_data, self.config(d=20))
        assert tau0 in candidates
        assert sum(candidates.hits.values()) >= len(candidates)

    def test_deterministic_and_thread_independent(self, sparse_data):
        serial = search_candidates(sparse_data, self.config())
        parallel = search_candidates(sparse_data, self.config(), threads=3)
        assert serial.to_dict() == parallel.to_dict()

    def test_more_copies_extend_fewer(self, sparse_data):
        small = search_candidates(sparse_data, self.config(d=4))
        large = search_candidates(sparse_data, self.config(d=9))
        assert set(small.models) <= set(large.models)

    def test_single_column(self, rng):
        X = rng.standard_normal((20, 1))
        data = Dataset(y=2.0 * X[:, 0] + rng.standard_normal(20), X=X)
        candidates = search_candidates(data, self.config(d=3))
        assert set(candidates.models) <= {ModelSupport(), ModelSupport((0,))}

    def test_constrained_mode(self, sparse_data):
        candidates = search_candidates(sparse_data, self.config(mode="constrained", k_max=3))
        assert all(1 <= len(m) <= 3 for m in candidates)

    def test_constrained_supports_prefers_largest(self):
        path = manual_path([ModelSupport(), ModelSupport((1,)), ModelSupport((0, 1)), ModelSupport((0, 1, 2))], 4)
        assert constrained_supports(path, 2, 10) == [ModelSupport((1,)), ModelSupport((0, 1))]

    def test_invalid_config(self, sparse_data):
        with pytest.raises(InvalidConfig):
            search_candidates(sparse_data, self.config(max_support=40))
        with pytest.raises(InvalidConfig):
            search_candidates(sparse_data, self.config(mode="exact"))

    def test_serialization_and_merge(self):
        a = CandidateSet()
        a.add(ModelSupport((0, 1)), 3)
        a.add(ModelSupport((0,)), 5)
        b = CandidateSet()
        b.add(ModelSupport((0, 1)), 1, count=2)
        merged = a.merge(b)
        assert merged.hits[ModelSupport((0, 1))] == 3
        assert merged.provenance[ModelSupport((0, 1))] == 1
        assert merged.models == [ModelSupport((0,)), ModelSupport((0, 1))]
        assert b.merge(a).to_dict() == merged.to_dict()
        assert CandidateSet.from_dict(merged.to_dict(), p=4).to_dict() == merged.to_dict()


class TestIdentifiability:
    def test_best_subset_orthonormal(self, orthonormal_design):
        y = orthonormal_design @ np.array([3.0, 0.0, -2.0, 0.1])
        assert best_subset(y, orthonormal_design, 2) == ModelSupport((0, 2))
        assert best_subset(np.zeros(20), orthonormal_design, 2) == ModelSupport()

    def test_best_subset_guard(self, rng):
        X = rng.standard_normal((10, 60))
        with pytest.raises(TooLarge):
            best_subset(rng.standard_normal(10), X, 5, limit=1000)

    def test_repro_argmin_recovers_truth(self, rng):
        for _ in range(5):
            X = rng.standard_normal((50, 8))
            u = rng.standard_normal(50)
            y = X[:, :3] @ np.array([3.0, 2.0, 1.5]) + u
            assert penalized_repro_argmin(y, X, u, lam=np.log(50)) == ModelSupport((0, 1, 2))

    def test_c_min_orthonormal(self, orthonormal_design):
        n = orthonormal_design.shape[0]
        value = c_min(orthonormal_design, ModelSupport((0,)), np.array([2.0]))
        assert value == pytest.approx(4.0 / n)

    def test_c_min_degenerate_cases(self, rng):
        X = rng.standard_normal((15, 4))
        assert c_min(X, ModelSupport((0,)), np.array([0.0])) == pytest.approx(0.0, abs=1e-20)
        X[:, 1] = X[:, 0]
        assert c_min(X, ModelSupport((0,)), np.array([1.5])) == pytest.approx(0.0, abs=1e-12)

    def test_c_min_guard(self, rng):
        with pytest.raises(TooLarge):
            c_min(rng.standard_normal((10, 2000)), ModelSupport((0, 1, 2)), np.ones(3))
