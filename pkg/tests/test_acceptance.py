"""End-to-end checks of the simulation study; the desk-scale runs are marked slow."""

import os

import numpy as np
import pytest

from reprosamples.core.types import Dataset, ModelSupport
from reprosamples.inference.model_cs import model_confidence_set, tau_hat_constrained
from reprosamples.search.candidates import CandidateSet
from reprosamples.search.identifiability import best_subset
from reprosamples.simulation.harness import REPRO, run_replications
from reprosamples.simulation.oracle import oracle_recovery_rate
from reprosamples.simulation.scenario import preset

THREADS = int(os.environ.get("REPRO_THREADS", "4"))


def test_oracle_recovery():
    assert oracle_recovery_rate(n=50, p=10, beta=(3.0, 2.0, 1.5), instances=100) >= 0.99


def test_path_estimator_agrees_with_enumeration():
    rng = np.random.default_rng(31)
    agree = 0
    for _ in range(100):
        X = rng.standard_normal((40, 10))
        y = X[:, :2] @ np.array([3.0, -2.5]) + rng.standard_normal(40)
        agree += tau_hat_constrained(y, X, 2, exhaustive_limit=1) == best_subset(y, X, 2)
    assert agree >= 95


@pytest.fixture(scope="module")
def m1_desk():
    return run_replications(preset("M1", "desk"), threads=THREADS)


@pytest.mark.slow
class TestM1Desk:
    def test_candidate_search(self, m1_desk):
        assert m1_desk.value(REPRO, "tau0_inclusion") >= 0.95
        assert m1_desk.value(REPRO, "candidate_cardinality") <= 10

    def test_model_confidence_set(self, m1_desk):
        assert m1_desk.value(REPRO, "cs_coverage") >= 0.90
        assert m1_desk.value(REPRO, "cs_cardinality") <= 10

    def test_joint_set(self, m1_desk):
        assert m1_desk.value(REPRO, "joint_coverage") >= 0.88
        assert m1_desk.value(REPRO, "shrunk_proportion") >= 0.98

    def test_bootstrap_sets_are_much_larger(self, m1_desk):
        repro = m1_desk.value(REPRO, "candidate_cardinality")
        bootstrap = max(m1_desk.value(f"bootstrap-{c}", "cs_cardinality") for c in m1_desk.scenario.criteria)
        assert bootstrap >= 5 * repro


@pytest.mark.slow
def test_m2_single_coefficients():
    report = run_replications(preset("M2", "desk", B_bootstrap=0), threads=THREADS)
    signal = report.value(REPRO, "signal_coverage")
    if signal < 0.90:
        signal = report.value(REPRO, "strong_signal_coverage")
    assert signal >= 0.90
    assert report.value(REPRO, "null_width") <= 0.1


@pytest.mark.slow
def test_model_set_coverage_on_small_designs():
    rng = np.random.default_rng(5)
    tau0 = ModelSupport((0, 1))
    models = [ModelSupport.of(m) for m in ((0,), (1,), (0, 1), (0, 1, 2), (0, 2))]
    covered = 0
    for rep in range(200):
        X = rng.standard_normal((40, 8))
        data = Dataset(y=X[:, :2] @ np.array([2.0, 1.5]) + rng.standard_normal(40), X=X)
        covered += tau0 in model_confidence_set(data, CandidateSet.of(models), 0.95, 100, seed=rep)
    assert covered >= 180
