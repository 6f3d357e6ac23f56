"""
Repository Pattern for Result Files
Every write goes to a temporary file in the target directory and is renamed into place
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Generic, Iterable, List, Sequence, Type, TypeVar

from pydantic import BaseModel

T = TypeVar("T", bound=BaseModel)


def format_cell(value: Any) -> str:
    """CSV cell text; floats keep 17 significant digits so they replay exactly"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


class BaseRepository(Generic[T]):
    """Base repository reading and writing one pydantic model type under a root directory"""

    def __init__(self, model: Type[T], root: Path):
        self.model = model
        self.root = Path(root)

    def path(self, name: str) -> Path:
        return self.root / name

    def write_text(self, name: str, text: str) -> Path:
        """Atomically replace `name` with text"""
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def save(self, name: str, instance: T) -> Path:
        """Write one record as indented JSON"""
        payload = json.dumps(instance.model_dump(mode="json"), indent=2, sort_keys=False)
        return self.write_text(name, payload + "\n")

    def load(self, name: str) -> T:
        with open(self.path(name), encoding="utf-8") as handle:
            return self.model.model_validate(json.load(handle))

    def write_rows(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
        return self.write_text(name, buffer.getvalue())

    def save_all(self, name: str, instances: Iterable[T], fields: List[str]) -> Path:
        """Write records as CSV, one column per field"""
        rows = []
        for instance in instances:
            data = instance.model_dump(mode="json")
            rows.append([data.get(f) for f in fields])
        return self.write_rows(name, fields, rows)
