import argparse
import sys
from typing import List, Optional

from loguru import logger

from reprosamples import __version__
from reprosamples.command.factory import CommandFactory
from reprosamples.command.manifest import RunManifest
from reprosamples.service.writer import ResultWriter
from reprosamples.utils import config as config_module
from reprosamples.utils.config import default_seed, runtime_threads, use_config
from reprosamples.utils.errors import ReproError
from reprosamples.utils.log import configure_logging


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reprosamples",
        description="Finite-sample model and coefficient inference for sparse linear regression by repro sampling",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=str, help="YAML configuration file (default: config.yml in the project root)")
    parser.add_argument("--threads", type=int, help="Worker threads (overrides REPRO_THREADS and the config)")
    parser.add_argument("--seed", type=int, help="Base random seed (overrides the config)")
    parser.add_argument("--out", type=str, help="Output file; JSON goes to stdout when absent")
    parser.add_argument("--log-level", dest="log_level", type=str, help="Log level, e.g. DEBUG or INFO")

    commands = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in CommandFactory.names():
        command = CommandFactory.get_command(name)
        command.add_arguments(commands.add_parser(name, help=command.help, description=command.help))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main function; returns the process exit code"""
    args = create_parser().parse_args(argv)

    try:
        if args.config:
            use_config(args.config)
        configure_logging(args.log_level)
        args.seed = default_seed() if args.seed is None else args.seed
        args.threads = runtime_threads(args.threads)

        command = CommandFactory.get_command(args.command)
        logger.info(f"Running {command.name} (seed={args.seed}, threads={args.threads})")
        manifest = RunManifest(command=command.name, config={"runtime": dict(config_module.config["runtime"])}, seed=args.seed)
        manifest.config["runtime"].update(seed=args.seed, threads=args.threads)
        result = command.handle(args, manifest)
        text = ResultWriter.write_json({"manifest": manifest.finish().to_dict(), "result": result}, args.out)
        if not args.out:
            sys.stdout.write(text)
    except ReproError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        logger.exception(f"Error in main: {e}")
        return 1
    return 0
