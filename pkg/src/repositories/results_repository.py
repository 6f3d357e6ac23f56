"""
Results Repository - run results, step traces and sweep tables
"""

from pathlib import Path
from typing import Iterable, List, Optional, Sequence

from src.repositories.base_repository import BaseRepository
from src.schemas.report_schemas import RunResults, StepReport, SweepRow

RESULTS_FILE = "results.json"
TRACE_FILE = "trace.csv"
SWEEP_FILE = "sweep.csv"
BEST_FILE = "best.json"

TRACE_FIELDS = ["t", "assigned_cluster", "k", "P", "rho_a", "v", "icvi_value", "ari_so_far"]
METRIC_FIELDS = ["ari", "acc", "n_mis", "k_hat", "P"]


class ResultsRepository(BaseRepository[RunResults]):
    """Repository for the files one run or sweep leaves in its output directory"""

    def save_results(self, results: RunResults) -> Path:
        return self.save(RESULTS_FILE, results)

    def load_results(self) -> RunResults:
        return self.load(RESULTS_FILE)

    def save_trace(self, reports: Iterable[StepReport]) -> Path:
        return self.save_all(TRACE_FILE, reports, TRACE_FIELDS)

    def save_sweep(self, rows: Sequence[SweepRow], param_names: List[str]) -> Path:
        header = list(param_names) + METRIC_FIELDS + ["runtime_s"]
        table = []
        for row in rows:
            metrics = row.metrics.model_dump()
            table.append(
                [row.params.get(p) for p in param_names]
                + [metrics[m] for m in METRIC_FIELDS]
                + [row.runtime_s]
            )
        return self.write_rows(SWEEP_FILE, header, table)

    def save_best(self, best: Optional[RunResults]) -> Optional[Path]:
        if best is None:
            return None
        return self.save(BEST_FILE, best)


def get_results_repository(root: Path) -> ResultsRepository:
    """Get ResultsRepository instance"""
    return ResultsRepository(RunResults, root)
