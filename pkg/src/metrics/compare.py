import json
import numbers
from typing import Dict

import numpy as np


def flatten(document, prefix: str = "") -> Dict[str, object]:
    """Maps slash-separated paths to the leaves of a JSON document."""
    if isinstance(document, dict):
        items = {}
        for key, value in document.items():
            items.update(flatten(value, f"{prefix}/{key}" if prefix else str(key)))
        return items
    if isinstance(document, list) and document and isinstance(document[0], (dict, list)):
        items = {}
        for i, value in enumerate(document):
            items.update(flatten(value, f"{prefix}/{i}"))
        return items
    return {prefix: document}


def leaves_agree(left, right, tol: float) -> bool:
    if isinstance(left, bool) or isinstance(right, bool):
        return isinstance(left, bool) and isinstance(right, bool) and left == right
    if isinstance(left, numbers.Number) and isinstance(right, numbers.Number):
        return abs(left - right) <= tol * max(1.0, abs(right))
    if isinstance(left, list) and isinstance(right, list):
        try:
            a, b = np.asarray(left, dtype=float), np.asarray(right, dtype=float)
        except (TypeError, ValueError):
            return left == right
        return a.shape == b.shape and bool(np.all(np.abs(a - b) <= tol * np.maximum(1.0, np.abs(b))))
    return left == right


def compare_documents(prediction: dict, reference: dict, tol: float = 1e-9) -> dict:
    """
    Compare two JSON documents and list:
    1. Keys missed (present in the reference but not in the prediction)
    2. Keys overfilled (present in the prediction but not in the reference)
    3. Keys that differ (numbers beyond the relative tolerance, anything else unequal)

    :param prediction: dict, freshly computed document
    :param reference: dict, stored document
    :param tol: float, relative tolerance for numbers
    :return: dict, counts and lists of keys for each category
    """
    predicted, expected = flatten(prediction), flatten(reference)
    keys_missed = sorted(set(expected) - set(predicted))
    keys_overfilled = sorted(set(predicted) - set(expected))
    keys_differing = sorted(
        key for key in set(expected) & set(predicted)
        if not leaves_agree(predicted[key], expected[key], tol)
    )
    return {
        "number_of_keys_missed": len(keys_missed),
        "keys_missed": keys_missed,
        "number_of_keys_overfilled": len(keys_overfilled),
        "keys_overfilled": keys_overfilled,
        "number_of_keys_differing": len(keys_differing),
        "keys_differing": keys_differing,
    }


def compare_json_files(pred_file_path: str, ref_file_path: str, tol: float = 1e-9) -> dict:
    with open(ref_file_path, 'r') as ref_file:
        reference = json.load(ref_file)
    with open(pred_file_path, 'r') as pred_file:
        prediction = json.load(pred_file)
    return compare_documents(prediction, reference, tol)


def compare_results(results: dict, reference_report: dict, tol: float = 1e-9) -> dict:
    """Compares freshly computed results with the results of a stored report."""
    return compare_documents(results, reference_report.get("results", {}), tol)
