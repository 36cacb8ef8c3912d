"""JSON representation of operators and assemblages.

An operator is a row-major nested list of ``[re, im]`` pairs; an assemblage is
``{"d": int, "measurements": [[effect, ...], ...]}``.
"""

from typing import Any, Dict, List

import numpy as np

from src.measurements.operators import Assemblage, matrix_to_pairs
from src.utils.errors import InvalidInputError


def operator_to_json(matrix: np.ndarray) -> List[List[List[float]]]:
    return matrix_to_pairs(np.asarray(matrix))


def operator_from_json(data: Any) -> np.ndarray:
    try:
        array = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"operator is not a nested array of numbers: {e}") from e
    if array.ndim != 3 or array.shape[2] != 2 or array.shape[0] != array.shape[1]:
        raise InvalidInputError(f"operator must be d x d x [re, im], got shape {array.shape}")
    return array[..., 0] + 1j * array[..., 1]


def assemblage_to_json(assemblage: Assemblage) -> Dict[str, Any]:
    return {
        "d": assemblage.dim,
        "measurements": [[operator_to_json(e) for e in row] for row in assemblage.arrays()],
    }


def assemblage_from_json(data: Dict[str, Any]) -> Assemblage:
    if not isinstance(data, dict) or "measurements" not in data:
        raise InvalidInputError("assemblage JSON needs a 'measurements' field")
    try:
        effects = [[operator_from_json(e) for e in row] for row in data["measurements"]]
        declared = int(data["d"]) if "d" in data else None
    except (TypeError, KeyError, ValueError) as e:
        raise InvalidInputError(f"malformed assemblage JSON: {e}") from e
    assemblage = Assemblage.from_arrays(effects)
    if declared is not None and declared != assemblage.dim:
        raise InvalidInputError(f"declared d={data['d']} but effects are {assemblage.dim}-dimensional")
    return assemblage
