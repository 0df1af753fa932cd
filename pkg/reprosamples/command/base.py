# reprosamples/command/base.py
import abc
import argparse
from dataclasses import asdict
import json
from typing import Any, Dict, Optional

from loguru import logger

from reprosamples.command.data import read_dataset, resolve_inputs
from reprosamples.command.manifest import RunManifest
from reprosamples.core.types import Dataset
from reprosamples.search.candidates import CandidateSet, SearchConfig, search_candidates
from reprosamples.utils.errors import InvalidConfig


class CommandHandler(abc.ABC):
    """Base abstract class for subcommands"""

    name: str = ""
    help: str = ""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Register the subcommand's own flags"""
        pass

    @abc.abstractmethod
    def handle(self, args: argparse.Namespace, manifest: RunManifest) -> Dict[str, Any]:
        """
        Run the subcommand

        Args:
            args: parsed command line, global flags resolved
            manifest: provenance record to fill with inputs and settings

        Returns:
            the result payload written next to the manifest
        """
        pass


def add_data_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--x", type=str, help="Design matrix CSV (n x p, optional header row)")
    parser.add_argument("--y", type=str, help="Response CSV (n x 1, optional header row)")
    parser.add_argument("--toy", action="store_true", help="Use the bundled toy dataset (n=40, p=8)")


def add_search_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, help="Number of repro copies")
    parser.add_argument("--mode", choices=["penalized", "constrained"], help="Candidate search mode")
    parser.add_argument("--k-max", dest="k_max", type=int, help="Largest support in constrained mode")
    parser.add_argument("--n-lambda", dest="n_lambda", type=int, help="Length of the lambda grid")


def load_data(args: argparse.Namespace, manifest: RunManifest) -> Dataset:
    x_path, y_path = resolve_inputs(args.x, args.y, args.toy)
    manifest.add_inputs([x_path, y_path])
    data = read_dataset(x_path, y_path)
    logger.info(f"Loaded data: n={data.n}, p={data.p}")
    return data


def search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig.from_config(
        d=getattr(args, "d", None),
        mode=getattr(args, "mode", None),
        k_max=getattr(args, "k_max", None),
        n_lambda=getattr(args, "n_lambda", None),
        seed=args.seed,
    )


def load_candidates(path: Optional[str], p: int, manifest: RunManifest) -> Optional[CandidateSet]:
    """Candidate set from a ``search`` output file (full payload or bare result)"""
    if path is None:
        return None
    try:
        with open(path, "r") as handle:
            payload = json.load(handle)
    except FileNotFoundError as e:
        raise InvalidConfig(f"candidate file {path} not found") from e
    except json.JSONDecodeError as e:
        raise InvalidConfig(f"candidate file {path} is not valid JSON: {e}") from e
    manifest.add_inputs([path])
    payload = payload.get("result", payload)
    if "models" not in payload:
        raise InvalidConfig(f"candidate file {path} has no 'models' list")
    return CandidateSet.from_dict(payload, p)


def candidates_for(args: argparse.Namespace, data: Dataset, manifest: RunManifest) -> CandidateSet:
    """Candidates read from --candidates, else searched inline"""
    candidates = load_candidates(getattr(args, "candidates", None), data.p, manifest)
    if candidates is not None:
        logger.info(f"Read {len(candidates)} candidate models")
        return candidates
    config = search_config(args)
    manifest.config["search"] = asdict(config)
    return search_candidates(data, config, threads=args.threads)
