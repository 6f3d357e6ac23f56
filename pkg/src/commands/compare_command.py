import argparse
import logging
from pathlib import Path
from typing import List

from pydantic import ValidationError

from src.repositories.external_results_repository import get_external_results_repository
from src.repositories.results_repository import RESULTS_FILE, get_results_repository
from src.schemas.report_schemas import ComparisonRow
from src.utils.exceptions import ConfigError, DatasetError
from src.utils.responses import (
    EXIT_INTERNAL_ERROR,
    EXIT_USER_ERROR,
    error_response,
    success_response,
)

logger = logging.getLogger(__name__)


def _rows_from(path: Path) -> List[ComparisonRow]:
    """A run directory, a results.json file or an external CSV table"""
    if path.is_dir():
        path = path / RESULTS_FILE
    if path.suffix == ".csv":
        return get_external_results_repository(path.parent).read_table(path)
    if not path.is_file():
        raise DatasetError(f"No results found at {path}")

    try:
        results = get_results_repository(path.parent).load(path.name)
    except (ValidationError, ValueError) as e:
        raise DatasetError(f"{path} is not a results file: {e}")
    return [
        ComparisonRow(
            model=results.model,
            order=results.order,
            ari=results.metrics.ari,
            k_hat=results.metrics.k_hat,
            P=results.metrics.P,
            source=results.name,
        )
    ]


def compare_command(args: argparse.Namespace) -> int:
    """
    Merge our results and externally produced tables into one comparison CSV
    """
    try:
        if not args.inputs:
            raise ConfigError("compare needs at least one results file or table")
        rows: List[ComparisonRow] = []
        for item in args.inputs:
            rows.extend(_rows_from(Path(item)))

        repository = get_external_results_repository(Path(args.out_dir))
        table_path = repository.write_table(args.output, rows)
        return success_response(
            "Comparison table written", {"rows": len(rows), "table": str(table_path)}
        )

    except (ConfigError, DatasetError, FileNotFoundError) as e:
        logger.warning(f"Rejected compare request: {str(e)}")
        return error_response(
            EXIT_USER_ERROR,
            "Invalid compare request",
            type(e).__name__,
            {"detail": [str(e)]},
        )
    except Exception as e:
        logger.error(f"Compare failed: {str(e)}", exc_info=True)
        return error_response(
            EXIT_INTERNAL_ERROR,
            "Compare failed with an internal error",
            "INTERNAL_ERROR",
        )
