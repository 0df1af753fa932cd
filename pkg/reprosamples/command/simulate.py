# reprosamples/command/simulate.py
import argparse
from pathlib import Path
from typing import Any, Dict

from loguru import logger

from reprosamples.command.base import CommandHandler
from reprosamples.command.manifest import RunManifest
from reprosamples.service.writer import ResultWriter
from reprosamples.simulation.harness import run_replications
from reprosamples.simulation.scenario import load_scenario, preset
from reprosamples.utils.constants import OUTPUT_DIR


class SimulateCommand(CommandHandler):
    """Replicated simulation study on a built-in or YAML scenario"""

    name = "simulate"
    help = "Run the simulation study"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--scenario", type=str, default="M1", help="M1, M2, M3 or a scenario YAML file")
        parser.add_argument("--reps", type=int, help="Number of replications")
        parser.add_argument("--scale", choices=["desk", "full"], default="desk", help="Monte-Carlo sizes")
        parser.add_argument("--criteria", type=str, help="Bootstrap tuning criteria, e.g. aic,bic,cv")
        parser.add_argument("--d", type=int, help="Repro copies per replication")
        parser.add_argument("--J", dest="J", type=int, help="Conditional resamples per candidate")
        parser.add_argument("--B", dest="B_bootstrap", type=int, help="Bootstrap replicates (0 skips the baseline)")
        parser.add_argument("--table", type=str, help="Also write the mean (se) table to this CSV")

    def handle(self, args: argparse.Namespace, manifest: RunManifest) -> Dict[str, Any]:
        overrides = {
            "reps": args.reps,
            "d": args.d,
            "J": args.J,
            "B_bootstrap": args.B_bootstrap,
            "seed": args.seed,
            "criteria": tuple(c.strip() for c in args.criteria.split(",") if c.strip()) if args.criteria else None,
        }
        if Path(args.scenario).suffix in (".yml", ".yaml"):
            manifest.add_inputs([args.scenario])
            scenario = load_scenario(args.scenario, scale=args.scale, **overrides)
        else:
            scenario = preset(args.scenario, args.scale, **overrides)
        manifest.config["scenario"] = scenario.to_dict()

        report = run_replications(scenario, threads=args.threads)
        csv_path = Path(args.out).with_suffix(".csv") if args.out else OUTPUT_DIR / f"{scenario.name}_{scenario.scale}.csv"
        report.to_csv(csv_path, manifest=manifest.attach(csv_path))
        if args.table:
            ResultWriter.write_frame(report.wide(), args.table, manifest=manifest.attach(args.table))
        logger.info(f"\n{report.wide().to_string(index=False)}")
        return report.to_dict()
