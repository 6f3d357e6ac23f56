"""
Build an ExperimentConfig from an optional TOML file plus command-line overrides
"""

import argparse
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.repositories.experiment_repository import get_experiment_repository
from src.schemas.experiment_schemas import SYNTHETIC_SOURCE, ExperimentConfig
from src.utils.exceptions import ConfigError


def parse_sweep_flags(flags: Optional[List[str]]) -> Dict[str, str]:
    """`--sweep rho_a=0:0.9:0.1` may be given several times"""
    grids: Dict[str, str] = {}
    for flag in flags or []:
        key, sep, spec = flag.partition("=")
        if not sep or not key.strip() or not spec.strip():
            raise ConfigError(f"--sweep expects key=grid, got '{flag}'")
        grids[key.strip()] = spec.strip()
    return grids


def build_experiment(args: argparse.Namespace) -> ExperimentConfig:
    data: Dict[str, Any] = {}
    if getattr(args, "config", None):
        data = get_experiment_repository().read(args.config)

    for key in ("model", "order", "seed", "protocol"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value

    dataset = getattr(args, "dataset", None)
    if dataset is not None:
        block = dict(data.get("dataset", {}))
        block["source"] = SYNTHETIC_SOURCE if dataset == SYNTHETIC_SOURCE else dataset
        data["dataset"] = block

    params = dict(data.get("params", {}))
    if getattr(args, "icvi", None) is not None:
        params["icvi"] = args.icvi
    if getattr(args, "k", None) is not None:
        params["k"] = args.k
    data["params"] = params

    grids = parse_sweep_flags(getattr(args, "sweep", None))
    if grids:
        data["sweep"] = {**data.get("sweep", {}), **grids}

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment configuration: {e}")
