# config.py
import os
import json
import logging
from typing import Optional

from pydantic import BaseModel, Field, ValidationError

from src.errors import InputError

logger = logging.getLogger(__name__)

TOLERANCE_ENV_VAR = "NDSYS_TOL"


class Settings(BaseModel):
    """
    Numeric knobs shared by the library and the command line.

    exact_tol applies to algebraic identities, iterative_tol to quantities
    obtained from sampled spans or iterative refinement, verdict_tol is the
    uniform --tol used for pass/fail decisions.
    """
    exact_tol: float = Field(1e-10, gt=0)
    iterative_tol: float = Field(1e-8, gt=0)
    verdict_tol: float = Field(1e-9, gt=0)
    rank_tol: float = Field(1e-10, gt=0)
    torus_samples: int = Field(32, ge=1)
    torus_max_points: int = Field(100_000, ge=1)
    refine_steps: int = Field(50, ge=0)
    max_multipower_cells: int = Field(1_000_000, ge=1)
    realization_grid: int = Field(200, ge=1)
    seed: int = 0


DEFAULTS = Settings()


def load_settings(config_path: Optional[str] = None, **overrides) -> Settings:
    """
    Builds the effective settings.

    Args:
        config_path (str): Optional JSON file whose keys are Settings fields.
        overrides: Explicit values (command-line flags); None values are ignored.
    Returns:
        Settings: defaults < config file < NDSYS_TOL < overrides.
    """
    values = {}
    if config_path:
        if not os.path.exists(config_path):
            raise InputError(f"Config file not found: {config_path}")
        try:
            with open(config_path, 'r') as file:
                values.update(json.load(file))
        except json.JSONDecodeError as e:
            raise InputError(f"Config file {config_path} is not valid JSON: {e}") from e

    env_tol = os.getenv(TOLERANCE_ENV_VAR)
    if env_tol:
        try:
            values["verdict_tol"] = float(env_tol)
        except ValueError as e:
            raise InputError(f"{TOLERANCE_ENV_VAR}={env_tol!r} is not a number") from e
        logger.debug("verdict tolerance taken from %s: %s", TOLERANCE_ENV_VAR, env_tol)

    values.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return Settings(**values)
    except ValidationError as e:
        raise InputError(f"Invalid settings: {e}") from e
