"""
External Results Repository - result tables produced outside this engine and comparison output
"""

import csv
from pathlib import Path
from typing import List

from pydantic import ValidationError

from src.repositories.base_repository import BaseRepository
from src.schemas.report_schemas import ComparisonRow
from src.utils.exceptions import DatasetError

EXTERNAL_FIELDS = ["model", "order", "ari", "k_hat", "P"]
COMPARISON_FIELDS = EXTERNAL_FIELDS + ["source"]


class ExternalResultsRepository(BaseRepository[ComparisonRow]):
    """Repository for `model,order,ari,k_hat,P` tables"""

    def read_table(self, path: Path) -> List[ComparisonRow]:
        path = Path(path)
        if not path.is_file():
            raise DatasetError(f"Result table not found: {path}")

        rows: List[ComparisonRow] = []
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            missing = [f for f in ("model", "order") if f not in (reader.fieldnames or [])]
            if missing:
                raise DatasetError(f"{path}: missing columns {missing}")
            for line_no, record in enumerate(reader, start=2):
                cleaned = {
                    key: (value.strip() or None)
                    for key, value in record.items()
                    if key in EXTERNAL_FIELDS and value is not None
                }
                try:
                    rows.append(ComparisonRow(source=path.stem, **cleaned))
                except ValidationError as e:
                    raise DatasetError(f"{path}:{line_no}: {e.errors()[0]['msg']}")
        return rows

    def write_table(self, name: str, rows: List[ComparisonRow]) -> Path:
        return self.save_all(name, rows, COMPARISON_FIELDS)


def get_external_results_repository(root: Path) -> ExternalResultsRepository:
    """Get ExternalResultsRepository instance"""
    return ExternalResultsRepository(ComparisonRow, root)
