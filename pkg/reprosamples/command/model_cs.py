# reprosamples/command/model_cs.py
import argparse
from typing import Any, Dict

from loguru import logger

from reprosamples.command.base import (
    CommandHandler,
    add_data_arguments,
    add_search_arguments,
    candidates_for,
    load_data,
)
from reprosamples.command.manifest import RunManifest
from reprosamples.inference.model_cs import check_level, confidence_curve, model_confidence_set
from reprosamples.service.writer import ResultWriter
from reprosamples.utils.config import model_cs_defaults


class ModelCsCommand(CommandHandler):
    """Model confidence set over a candidate set"""

    name = "model-cs"
    help = "Confidence set for the true model"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_data_arguments(parser)
        add_search_arguments(parser)
        parser.add_argument("--candidates", type=str, help="Candidate JSON written by 'search'; searched inline when absent")
        parser.add_argument("--alpha", type=float, help="Coverage level, e.g. 0.95")
        parser.add_argument("--J", dest="J", type=int, help="Conditional resamples per candidate")
        parser.add_argument("--curve", type=str, help="Write the confidence curve to this CSV")

    def handle(self, args: argparse.Namespace, manifest: RunManifest) -> Dict[str, Any]:
        defaults = model_cs_defaults()
        alpha = defaults["alpha"] if args.alpha is None else args.alpha
        J = defaults["J"] if args.J is None else args.J
        check_level(alpha)
        manifest.config["model_cs"] = {"alpha": alpha, "J": J}

        data = load_data(args, manifest)
        candidates = candidates_for(args, data, manifest)
        mcs = model_confidence_set(data, candidates, alpha, J, args.seed, threads=args.threads)
        for entry in mcs.entries:
            if entry.included:
                logger.info(f"Included {entry.support}: tail probability {entry.tail_prob:.3f}")

        if args.curve:
            ResultWriter.write_frame(confidence_curve(mcs), args.curve, manifest=manifest.attach(args.curve))
        return mcs.to_dict()
