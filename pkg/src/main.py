"""
iCVI-TopoARTMAP Stream Clustering
Command-line Entry Point
"""

import argparse
import logging
import sys
from typing import List, Optional

from src.commands.compare_command import compare_command
from src.commands.run_command import run_command
from src.commands.sweep_command import sweep_command
from src.utils.log_config import configure_logging
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML experiment file")
    parser.add_argument("--model", help="icvi_topoartmap, skm, ws_dvfa, ws_topofa, etopofa or nn")
    parser.add_argument("--icvi", help="ch, wb, pbm, xb, db or conn")
    parser.add_argument("--order", help="class_incremental, mixed or random")
    parser.add_argument("--protocol", help="unsupervised or semi_supervised")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--dataset", help="'synthetic' or a CSV path")
    parser.add_argument("--k", type=int, help="Cluster count for skm")
    parser.add_argument("--out-dir", dest="out_dir", default="results")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icvi-topoartmap",
        description="Online clustering with iCVI-TopoARTMAP and its baselines",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Train one model on one stream")
    _add_experiment_flags(run)
    run.set_defaults(handler=run_command)

    sweep = commands.add_parser("sweep", help="Grid search over model parameters")
    _add_experiment_flags(sweep)
    sweep.add_argument(
        "--sweep", action="append", metavar="KEY=GRID", help="e.g. rho_a=0:0.9:0.1"
    )
    sweep.set_defaults(handler=sweep_command)

    compare = commands.add_parser("compare", help="Merge result files into one table")
    compare.add_argument("inputs", nargs="*", help="Run directories, results.json or CSV tables")
    compare.add_argument("--out-dir", dest="out_dir", default="results")
    compare.add_argument("--output", default="comparison.csv")
    compare.set_defaults(handler=compare_command)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    settings = get_settings()
    configure_logging(settings.log_level, settings.log_file)

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors; those are user errors here
        return 0 if e.code == 0 else 1

    logger.info(f"Starting '{args.command}' command")
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
