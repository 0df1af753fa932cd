# reprosamples/command/coef.py
import argparse
from typing import Any, Dict, List, Optional, Tuple

from loguru import logger

from reprosamples.command.base import (
    CommandHandler,
    add_data_arguments,
    add_search_arguments,
    candidates_for,
    load_data,
    search_config,
)
from reprosamples.command.data import read_matrix
from reprosamples.command.manifest import RunManifest
from reprosamples.core.rng import Stream
from reprosamples.core.types import Dataset
from reprosamples.inference.coef_cs import (
    check_split_levels,
    confident_candidates,
    joint_conf_set,
    single_coef_ci,
    subset_conf_region,
)
from reprosamples.inference.functional import functional_conf_set, parse_functional
from reprosamples.inference.model_cs import check_level
from reprosamples.inference.transform import linear_transform_inference
from reprosamples.search.candidates import CandidateSet
from reprosamples.utils.config import coef_defaults, model_cs_defaults
from reprosamples.utils.constants import STREAM_FUNCTIONAL
from reprosamples.utils.errors import FlagConflict, InvalidConfig


def parse_index_list(text: str, p: Optional[int] = None) -> List[int]:
    """'1,3,5' -> [0, 2, 4]"""
    try:
        indices = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InvalidConfig(f"cannot parse index list {text!r}") from e
    if not indices:
        raise InvalidConfig("index list is empty")
    for i in indices:
        if i < 1 or (p is not None and i > p):
            raise InvalidConfig(f"index {i} outside [1, {p}]")
    return [i - 1 for i in indices]


class CoefCommand(CommandHandler):
    """Confidence sets for coefficients, subsets of them and functionals"""

    name = "coef"
    help = "Confidence sets for regression coefficients"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_data_arguments(parser)
        add_search_arguments(parser)
        target = parser.add_mutually_exclusive_group(required=True)
        target.add_argument("--index", type=int, help="Single coefficient (1-based)")
        target.add_argument("--subset", type=str, help="Comma-separated coefficient indices, e.g. 1,3,5")
        target.add_argument("--joint", action="store_true", help="All coefficients jointly")
        target.add_argument("--functional", type=str, help="Expression over b[1]..b[p], e.g. 'b[1] / b[2]'")
        target.add_argument("--transform", type=str, help="CSV holding L (l x p) for inference on L beta")
        parser.add_argument("--candidates", type=str, help="Candidate JSON written by 'search'")
        parser.add_argument("--alpha", type=float, help="Coverage level")
        parser.add_argument("--alpha1", type=float, help="Level of the model confidence set for the modified set")
        parser.add_argument("--alpha2", type=float, help="Level of the per-model regions for the modified set")
        parser.add_argument("--J", dest="J", type=int, help="Conditional resamples for the modified set")
        parser.add_argument("--samples", type=int, help="Uniform draws per region for nonlinear functionals")

    @staticmethod
    def levels(args: argparse.Namespace) -> Tuple[float, Optional[float], Optional[float]]:
        """(overall level, alpha1, alpha2); the split levels are None without --alpha1/--alpha2"""
        split = args.alpha1 is not None or args.alpha2 is not None
        if split and args.alpha is not None:
            raise FlagConflict("--alpha cannot be combined with --alpha1/--alpha2")
        if split:
            if args.alpha1 is None or args.alpha2 is None:
                raise FlagConflict("--alpha1 and --alpha2 must be given together")
            return check_split_levels(args.alpha1, args.alpha2), args.alpha1, args.alpha2
        alpha = model_cs_defaults()["alpha"] if args.alpha is None else args.alpha
        check_level(alpha)
        return alpha, None, None

    def handle(self, args: argparse.Namespace, manifest: RunManifest) -> Dict[str, Any]:
        alpha, alpha1, alpha2 = self.levels(args)
        manifest.config["coef"] = {"alpha": alpha, "alpha1": alpha1, "alpha2": alpha2}
        data = load_data(args, manifest)

        if args.transform:
            return self._transform(args, data, alpha, alpha1, manifest)

        candidates = candidates_for(args, data, manifest)
        region_level = alpha
        if alpha1 is not None:
            J = model_cs_defaults()["J"] if args.J is None else args.J
            manifest.config["coef"]["J"] = J
            candidates = confident_candidates(data, candidates, alpha1, J, args.seed, threads=args.threads)
            region_level = alpha2

        result: Dict[str, Any] = {"level": alpha, "candidates": len(candidates)}
        if args.index is not None:
            i = parse_index_list(str(args.index), data.p)[0]
            result.update(index=i + 1, **single_coef_ci(data.y, data.X, i, candidates, region_level).to_dict())
        elif args.subset:
            union = subset_conf_region(data.y, data.X, parse_index_list(args.subset, data.p), candidates, region_level)
            union.alpha = alpha
            result.update(union.to_dict())
        elif args.joint:
            union = joint_conf_set(data.y, data.X, candidates, region_level)
            union.alpha = alpha
            result.update(union.to_dict())
        else:
            result.update(self._functional(args, data, candidates, region_level, manifest))
        return result

    @staticmethod
    def _functional(
        args: argparse.Namespace, data: Dataset, candidates: CandidateSet, level: float, manifest: RunManifest
    ) -> Dict[str, Any]:
        samples = coef_defaults()["samples_per_region"] if args.samples is None else args.samples
        manifest.config["coef"]["samples_per_region"] = samples
        h = parse_functional(args.functional, data.p)
        joint = joint_conf_set(data.y, data.X, candidates, level)
        stream = Stream(args.seed).child(STREAM_FUNCTIONAL)
        out = functional_conf_set(h, joint, samples, stream).to_dict()
        out["expression"] = args.functional
        return out

    @staticmethod
    def _transform(
        args: argparse.Namespace, data: Dataset, alpha: float, alpha1: Optional[float], manifest: RunManifest
    ) -> Dict[str, Any]:
        if alpha1 is not None:
            raise FlagConflict("--transform supports --alpha only")
        if args.candidates:
            raise FlagConflict("--transform searches on the transformed design; --candidates does not apply")
        manifest.add_inputs([args.transform])
        L = read_matrix(args.transform)
        config = search_config(args)
        result = linear_transform_inference(L, data, config, alpha, threads=args.threads)
        logger.info(f"Transform completed with unit rows {[j + 1 for j in result.completion]}")
        out = result.region.to_dict()
        out.update(
            level=alpha,
            candidates=len(result.candidates),
            completion=[j + 1 for j in result.completion],
        )
        return out
