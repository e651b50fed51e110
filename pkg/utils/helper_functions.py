import os
import json
import logging
import sys

UTILS_DIR = os.path.dirname(os.path.abspath(__file__))
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(verbose: bool = False):
    """Logs to stderr; stdout carries the report."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def load_schema(name: str) -> dict:
    """Reads utils/<name>_schema.json."""
    schema_path = os.path.join(UTILS_DIR, f"{name}_schema.json")
    with open(schema_path, 'r') as file:
        return json.load(file)
