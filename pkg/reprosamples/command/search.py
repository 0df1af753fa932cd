# reprosamples/command/search.py
import argparse
from dataclasses import asdict
from typing import Any, Dict

from reprosamples.command.base import CommandHandler, add_data_arguments, add_search_arguments, load_data, search_config
from reprosamples.command.manifest import RunManifest
from reprosamples.search.candidates import search_candidates


class SearchCommand(CommandHandler):
    """Candidate model search over repro copies"""

    name = "search"
    help = "Collect candidate models from repro copies"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_data_arguments(parser)
        add_search_arguments(parser)

    def handle(self, args: argparse.Namespace, manifest: RunManifest) -> Dict[str, Any]:
        data = load_data(args, manifest)
        config = search_config(args)
        manifest.config["search"] = asdict(config)
        return search_candidates(data, config, threads=args.threads).to_dict()
