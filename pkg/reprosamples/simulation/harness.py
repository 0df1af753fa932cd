"""Replication driver for the simulation study.

Each replication draws a fresh dataset, runs the repro-samples pipeline
(candidate search, model confidence set, single-coefficient intervals, joint
set) and the residual-bootstrap baselines, and scores every method against
the generating model. Scores are folded over replications in index order into
a long table of means and standard errors.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger
import numpy as np
import pandas as pd

from reprosamples.baseline.bootstrap import residual_bootstrap_models
from reprosamples.core.rng import Stream
from reprosamples.core.types import Dataset
from reprosamples.inference.coef_cs import joint_conf_set, single_coef_ci
from reprosamples.inference.model_cs import model_confidence_set
from reprosamples.inference.regions import IntervalUnion
from reprosamples.search.candidates import CandidateSet, SearchConfig, search_candidates
from reprosamples.service.executor import TaskRunner
from reprosamples.service.writer import ResultWriter
from reprosamples.simulation.generator import GroundTruth, generate
from reprosamples.simulation.scenario import ScenarioConfig
from reprosamples.utils.constants import STREAM_SIMULATION
from reprosamples.utils.errors import ReproError

STRONG_SIGNAL = 1.0
REPRO = "repro"

Scores = Dict[Tuple[str, str], float]


def replication_seed(scenario: ScenarioConfig, rep: int) -> int:
    """Integer seed for the inference stages of one replication"""
    generator = Stream(scenario.seed).child(STREAM_SIMULATION, rep, 1).generator()
    return int(generator.integers(0, 2**63 - 1))


def coefficient_intervals(data: Dataset, candidates: CandidateSet, alpha: float) -> List[IntervalUnion]:
    """Single-coefficient sets for every column; columns outside all candidates are the point zero"""
    touched = sorted(set().union(*[set(m) for m in candidates.models])) if len(candidates) else []
    point = IntervalUnion.from_pieces([], zero_atom=True)
    intervals = [point] * data.p
    for j in touched:
        intervals[j] = single_coef_ci(data.y, data.X, j, candidates, alpha)
    return intervals


def _coverage(intervals: List[IntervalUnion], truth: np.ndarray, columns: Sequence[int]) -> Tuple[float, float]:
    if len(columns) == 0:
        return np.nan, np.nan
    hits = [intervals[j].contains(float(truth[j])) for j in columns]
    widths = [intervals[j].width for j in columns]
    return float(np.mean(hits)), float(np.mean(widths))


def score_repro(data: Dataset, truth: GroundTruth, scenario: ScenarioConfig, seed: int) -> Scores:
    """
    Scores of the repro-samples pipeline on one replication

    An empty candidate set is scored as a miss: empty model and joint sets,
    and the point zero for every coefficient.
    """
    config = SearchConfig.from_config(d=scenario.d, seed=seed)
    candidates = search_candidates(data, config)
    scores: Scores = {
        (REPRO, "candidate_cardinality"): float(len(candidates)),
        (REPRO, "tau0_inclusion"): float(truth.tau0 in candidates),
        (REPRO, "cs_cardinality"): 0.0,
        (REPRO, "cs_coverage"): 0.0,
        (REPRO, "joint_coverage"): 0.0,
        (REPRO, "shrunk_proportion"): 1.0,
    }
    if len(candidates) == 0:
        logger.warning("Candidate search found no models; scoring the replication as a miss")
    else:
        mcs = model_confidence_set(data, candidates, scenario.alpha, scenario.J, seed)
        scores[(REPRO, "cs_cardinality")] = float(len(mcs))
        scores[(REPRO, "cs_coverage")] = float(truth.tau0 in mcs)

    beta_full = truth.beta_full(data.p)
    intervals = coefficient_intervals(data, candidates, scenario.alpha)
    signal = list(truth.tau0)
    strong = [j for j in signal if abs(beta_full[j]) >= STRONG_SIGNAL]
    null = [j for j in range(data.p) if j not in truth.tau0]
    for label, columns in (("signal", signal), ("strong_signal", strong), ("null", null)):
        coverage, width = _coverage(intervals, beta_full, columns)
        scores[(REPRO, f"{label}_coverage")] = coverage
        scores[(REPRO, f"{label}_width")] = width

    if len(candidates):
        joint = joint_conf_set(data.y, data.X, candidates, scenario.alpha)
        scores[(REPRO, "joint_coverage")] = float(joint.contains(beta_full))
        scores[(REPRO, "shrunk_proportion")] = joint.shrunk_proportion
    return scores


def score_bootstrap(data: Dataset, truth: GroundTruth, scenario: ScenarioConfig, seed: int) -> Scores:
    scores: Scores = {}
    for criterion in scenario.criteria:
        method = f"bootstrap-{criterion}"
        boot = residual_bootstrap_models(data, scenario.B_bootstrap, criterion, seed)
        scores[(method, "candidate_cardinality")] = float(boot.distinct)
        scores[(method, "tau0_inclusion")] = float(truth.tau0 in boot.frequency)
        scores[(method, "cs_cardinality")] = float(len(boot))
        scores[(method, "cs_coverage")] = float(truth.tau0 in boot)
    return scores


def run_replication(scenario: ScenarioConfig, rep: int) -> Optional[Scores]:
    """Scores of one replication, or None when it failed"""
    try:
        data, truth = generate(scenario, rep)
        seed = replication_seed(scenario, rep)
        scores = score_repro(data, truth, scenario, seed)
        if scenario.B_bootstrap > 0:
            scores.update(score_bootstrap(data, truth, scenario, seed))
    except ReproError as e:
        logger.warning(f"Replication {rep + 1} of {scenario.name} failed: {e}")
        return None
    logger.info(f"Replication {rep + 1}/{scenario.reps} of {scenario.name} finished")
    return scores


@dataclass
class SimReport:
    """Per-method means and standard errors over the replications of a scenario"""

    scenario: ScenarioConfig
    table: pd.DataFrame
    failures: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)

    def value(self, method: str, metric: str, column: str = "mean") -> float:
        row = self.table[(self.table["method"] == method) & (self.table["metric"] == metric)]
        if row.empty:
            raise KeyError(f"no {metric} for {method}")
        return float(row[column].iloc[0])

    def wide(self) -> pd.DataFrame:
        """Method by metric table of "mean (se)" cells"""
        cells = self.table.assign(cell=[f"{m:.3f} ({s:.3f})" for m, s in zip(self.table["mean"], self.table["se"])])
        frame = cells.pivot(index="method", columns="metric", values="cell").fillna("")
        frame.columns.name = None
        return frame.reset_index()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario.to_dict(),
            "failures": self.failures,
            "metadata": self.metadata,
            "rows": self.table.to_dict(orient="records"),
        }

    def to_csv(self, path: Union[str, Path], manifest: Optional[Dict[str, Any]] = None) -> None:
        ResultWriter.write_frame(self.table, path, manifest=manifest)

    def to_json(self, path: Optional[Union[str, Path]] = None) -> str:
        return ResultWriter.write_json(self.to_dict(), path)


def aggregate(results: Sequence[Optional[Scores]]) -> pd.DataFrame:
    """Fold per-replication scores in replication order into mean and sd/sqrt(R)"""
    records = [
        {"rep": rep, "method": method, "metric": metric, "value": value}
        for rep, scores in enumerate(results)
        if scores is not None
        for (method, metric), value in scores.items()
    ]
    if not records:
        return pd.DataFrame(columns=["method", "metric", "mean", "se", "reps"])
    frame = pd.DataFrame.from_records(records).dropna(subset=["value"])
    grouped = frame.groupby(["method", "metric"], sort=True)["value"]
    table = grouped.agg(mean="mean", sd="std", reps="count").reset_index()
    table["se"] = (table["sd"].fillna(0.0) / np.sqrt(table["reps"])).astype(float)
    return table[["method", "metric", "mean", "se", "reps"]]


def run_replications(scenario: ScenarioConfig, threads: int = 1) -> SimReport:
    """
    Run every replication of a scenario and aggregate the scores

    Args:
        scenario: design and Monte-Carlo sizes
        threads: replications run concurrently on this many workers

    Returns:
        SimReport; failed replications are counted and left out of the means
    """
    if scenario.scale == "full":
        logger.warning(f"Full-scale run of {scenario.name}: {scenario.reps} replications with d={scenario.d}, this can take hours")
    logger.info(f"Simulating {scenario.name}: n={scenario.n}, p={scenario.p}, R={scenario.reps}")

    results = TaskRunner.map(
        lambda rep: run_replication(scenario, rep), range(scenario.reps), threads=threads, label="replications"
    )
    failures = sum(r is None for r in results)
    report = SimReport(
        scenario=scenario,
        table=aggregate(results),
        failures=failures,
        metadata={
            "design": "regenerated per replication",
            "standardized": False,
            "strong_signal_threshold": STRONG_SIGNAL,
            "completed": scenario.reps - failures,
        },
    )
    logger.info(f"{scenario.name}: {scenario.reps - failures} replications completed, {failures} failed")
    return report
