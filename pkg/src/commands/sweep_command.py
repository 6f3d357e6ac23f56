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
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)


def sweep_command(args: argparse.Namespace) -> int:
    """
    Run every grid point of the experiment and write sweep.csv plus the best run
    """
    try:
        config = build_experiment(args)
        rows, best = experiment_service.sweep(config, workers=get_settings().workers)

        repository = get_results_repository(Path(args.out_dir))
        sweep_path = repository.save_sweep(rows, list(config.sweep))
        best_path = repository.save_best(best)

        return success_response(
            "Sweep completed",
            {
                "points": len(rows),
                "sweep": str(sweep_path),
                "best": str(best_path) if best_path else None,
                "best_metrics": best.metrics.model_dump() if best else None,
            },
        )

    except (ConfigError, DatasetError, MetricInputError, FileNotFoundError) as e:
        logger.warning(f"Rejected sweep request: {str(e)}")
        return error_response(
            EXIT_USER_ERROR,
            "Invalid sweep request",
            type(e).__name__,
            {"detail": [str(e)]},
        )
    except Exception as e:
        logger.error(f"Sweep failed: {str(e)}", exc_info=True)
        return error_response(
            EXIT_INTERNAL_ERROR,
            "Sweep failed with an internal error",
            "INTERNAL_ERROR",
        )
