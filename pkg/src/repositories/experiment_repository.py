"""
Experiment Repository - TOML experiment files
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict

from src.utils.exceptions import ConfigError


class ExperimentRepository:
    """Repository for experiment definitions on disk"""

    def read(self, path: Path) -> Dict[str, Any]:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Experiment file not found: {path}")
        try:
            with open(path, "rb") as handle:
                return tomllib.load(handle)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{path}: {e}")


def get_experiment_repository() -> ExperimentRepository:
    """Get ExperimentRepository instance"""
    return ExperimentRepository()
