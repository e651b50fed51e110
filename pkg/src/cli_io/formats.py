# formats.py
"""
JSON files of the command line: systems, lattice signals, Agler data and
point lists. Every document is checked against its schema in utils/ before
it is parsed; complex numbers are always [re, im] pairs.
"""
import os
import json
import logging
from typing import List

import jsonschema
import numpy as np

from src.errors import InputError
from src.realization.agler import AglerData
from src.system_core.signals import LatticeSignal, complex_to_pairs, pairs_to_complex
from src.system_core.system import MultiLSDS
from utils.helper_functions import load_schema

logger = logging.getLogger(__name__)

SYSTEM = "system"
SIGNAL = "signal"
AGLER = "agler"
POINTS = "points"


def read_json(path: str) -> dict:
    if not os.path.exists(path):
        raise InputError(f"File not found: {path}")
    try:
        with open(path, 'r') as file:
            return json.load(file)
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


def write_json(document: dict, path: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as file:
        json.dump(document, file, indent=2)
        file.write("\n")
    logger.debug("wrote %s", path)


def validate_document(document: dict, kind: str):
    try:
        jsonschema.validate(document, load_schema(kind))
    except jsonschema.ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise InputError(f"Invalid {kind} document at {location}: {e.message}") from e


def matrix_to_pairs(matrix: np.ndarray) -> list:
    return complex_to_pairs(matrix)


def matrix_from_pairs(pairs: list, rows: int, cols: int, where: str) -> np.ndarray:
    if rows * cols == 0:
        if len(pairs) not in (0, rows):
            raise InputError(f"{where}: expected an empty {rows}x{cols} matrix")
        return np.zeros((rows, cols), dtype=np.complex128)
    try:
        matrix = pairs_to_complex(pairs)
    except ValueError as e:
        raise InputError(f"{where}: ragged matrix") from e
    if matrix.shape != (rows, cols):
        raise InputError(f"{where}: shape {matrix.shape}, expected {(rows, cols)}")
    return matrix


def system_to_dict(sys: MultiLSDS) -> dict:
    return {
        "n": sys.n,
        "dims": {"x": sys.dim_x, "nm": sys.dim_nm, "np": sys.dim_np},
        "A": [matrix_to_pairs(m) for m in sys.a],
        "B": [matrix_to_pairs(m) for m in sys.b],
        "C": [matrix_to_pairs(m) for m in sys.c],
        "D": [matrix_to_pairs(m) for m in sys.d],
    }


def system_from_dict(document: dict) -> MultiLSDS:
    """Validates and parses a system document; dimension clashes are input errors."""
    validate_document(document, SYSTEM)
    n = document["n"]
    dims = document["dims"]
    x, nm, np_ = dims["x"], dims["nm"], dims["np"]
    shapes = {"A": (x, x), "B": (x, nm), "C": (np_, x), "D": (np_, nm)}
    members = {}
    for name, (rows, cols) in shapes.items():
        if len(document[name]) != n:
            raise InputError(f"{name} has {len(document[name])} members, expected N = {n}")
        members[name] = [matrix_from_pairs(m, rows, cols, f"{name}_{k + 1}")
                         for k, m in enumerate(document[name])]
    sys = MultiLSDS.from_matrices(members["A"], members["B"], members["C"], members["D"],
                                  dim_x=x, dim_nm=nm, dim_np=np_)
    return sys.require_valid()


def load_system(path: str) -> MultiLSDS:
    return system_from_dict(read_json(path))


def save_system(sys: MultiLSDS, path: str):
    write_json(system_to_dict(sys), path)


def load_signal(path: str) -> LatticeSignal:
    document = read_json(path)
    validate_document(document, SIGNAL)
    return LatticeSignal.from_dict(document)


def load_agler(path: str) -> AglerData:
    document = read_json(path)
    validate_document(document, AGLER)
    return AglerData.from_dict(document)


def load_points(path: str) -> List[np.ndarray]:
    document = read_json(path)
    validate_document(document, POINTS)
    return [pairs_to_complex(point) for point in document["points"]]
