"""
Solver settings.

Values come from, highest priority first: explicit overrides (CLI flags),
a JSON settings file, MINDIAM_* environment variables (a .env file is loaded
first), and the model defaults.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

try:
    from .errors import UsageError
except ImportError:
    from errors import UsageError

logger = logging.getLogger(__name__)

ENV_PREFIX = "MINDIAM_"


class SolverSettings(BaseModel):
    """Tester and harness parameters; None means derive from the graph size."""
    k: Optional[int] = Field(default=None, ge=1)
    interval_size: Optional[int] = Field(default=None, ge=1)
    base_case_threshold: Optional[int] = Field(default=None, ge=1)
    oracle_max_n: int = Field(default=2000, ge=2)
    workers: int = Field(default=1, ge=1)
    timeout_ms: Optional[int] = Field(default=None, ge=1)
    seed: int = 42
    audit: bool = False


def _from_env() -> Dict[str, Any]:
    values = {}
    for name in SolverSettings.model_fields:
        raw = os.environ.get(f"{ENV_PREFIX}{name.upper()}")
        if raw is not None and raw != "":
            values[name] = raw
    return values


def _from_file(path: Path) -> Dict[str, Any]:
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise UsageError(f"settings file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise UsageError(f"settings file {path} must hold a JSON object")
    unknown = set(data) - set(SolverSettings.model_fields)
    if unknown:
        raise UsageError(f"unknown settings in {path}: {', '.join(sorted(unknown))}")
    return data


def load_config(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None,
                env_file: Optional[Path] = None) -> SolverSettings:
    """Merge environment, settings file and overrides into SolverSettings."""
    load_dotenv(dotenv_path=env_file)
    values = _from_env()
    if path is not None:
        logger.info(f"Loading settings from: {path}")
        values.update(_from_file(Path(path)))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})

    try:
        settings = SolverSettings(**values)
    except ValidationError as e:
        raise UsageError(f"invalid settings: {e}") from e
    logger.debug(f"Settings: {settings.model_dump()}")
    return settings
