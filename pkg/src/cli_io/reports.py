# reports.py
import hashlib
import time
from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = "ndsys/1"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFICATION = 3


class RunReport(BaseModel):
    """What a command computed, from which files, and how long it took."""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(SCHEMA_VERSION, alias="schema")
    command: str
    status: str = "ok"
    exit_code: int = EXIT_OK
    inputs: Dict[str, str] = Field(default_factory=dict)
    results: Dict[str, Any] = Field(default_factory=dict)
    warnings: List[str] = Field(default_factory=list)
    timing: Dict[str, float] = Field(default_factory=dict)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


def file_digest(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as file:
        for block in iter(lambda: file.read(65536), b""):
            digest.update(block)
    return f"sha256:{digest.hexdigest()}"


def plain(value):
    """Converts numpy scalars, arrays and complex numbers into JSON values."""
    if isinstance(value, dict):
        return {str(key): plain(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


class Stopwatch:
    """Collects wall-clock seconds per named stage."""

    def __init__(self):
        self.timing: Dict[str, float] = {}
        self._started = time.perf_counter()

    def lap(self, name: str):
        now = time.perf_counter()
        self.timing[name] = round(now - self._started, 6)
        self._started = now


def error_report(command: str, error: Exception, exit_code: int) -> RunReport:
    results = {"error": type(error).__name__, "message": str(error)}
    residuals = getattr(error, "residuals", None)
    if residuals:
        results["residuals"] = plain(residuals)
    return RunReport(command=command, status="error" if exit_code == EXIT_INPUT else "failed",
                     exit_code=exit_code, results=results)
