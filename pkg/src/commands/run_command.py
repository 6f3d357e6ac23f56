import argparse
import logging
from pathlib import Path

from src.commands.experiment_args import build_experiment
from src.repositories.results_repository import get_results_repository
from src.services.experiment_service import experiment_service
from src.utils.exceptions import ConfigError, DatasetError, MetricInputError
from src.utils.responses import (
    EXIT_INTERNAL_ERROR,
    EXIT_USER_ERROR,
    error_response,
    success_response,
)

logger = logging.getLogger(__name__)


def run_command(args: argparse.Namespace) -> int:
    """
    Train one model on one stream and write results.json and trace.csv
    """
    try:
        config = build_experiment(args)
        outcome = experiment_service.run(config)

        repository = get_results_repository(Path(args.out_dir))
        results_path = repository.save_results(outcome.results)
        trace_path = repository.save_trace(outcome.trace)

        return success_response(
            "Run completed",
            {
                "results": str(results_path),
                "trace": str(trace_path),
                "metrics": outcome.results.metrics.model_dump(),
            },
        )

    except (ConfigError, DatasetError, MetricInputError, FileNotFoundError) as e:
        logger.warning(f"Rejected run request: {str(e)}")
        return error_response(
            EXIT_USER_ERROR,
            "Invalid run request",
            type(e).__name__,
            {"detail": [str(e)]},
        )
    except Exception as e:
        logger.error(f"Run failed: {str(e)}", exc_info=True)
        return error_response(
            EXIT_INTERNAL_ERROR,
            "Run failed with an internal error",
            "INTERNAL_ERROR",
        )
