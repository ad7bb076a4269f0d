"""JSON encodings for states, observables and reports.

State file::

    {"d1": 2, "d2": 2, "matrix": [[re, im], ...]}     # n*n pairs, row-major

Observable file, either explicit or the qubit shorthand::

    {"dim": 2, "matrix": [[re, im], ...]}
    {"alpha": 0.0, "n": [nx, ny, nz]}
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionError, DomainError, InvalidStateError
from .observables import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Observable,
    QubitObservableParams,
    qubit_observable,
)
from .states import BipartiteState, is_registry_name, named_state

SIGNIFICANT_DIGITS = 12


def round_sig(x: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    if not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


def rounded(obj):
    """Recursively round floats to 12 significant digits for emission."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj))
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return rounded(obj.tolist())
    return obj


def dumps(obj) -> str:
    return json.dumps(rounded(obj), indent=2, sort_keys=True)


def matrix_to_pairs(m: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(m, dtype=complex).reshape(-1)]


def pairs_to_matrix(data, n: int) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 3 and arr.shape == (n, n, 2):
        arr = arr.reshape(n * n, 2)
    if arr.shape != (n * n, 2):
        raise DimensionError(
            f"matrix must hold {n * n} [re, im] pairs for dimension {n}, got shape {arr.shape}"
        )
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(n, n)


def state_to_dict(rho: BipartiteState) -> dict:
    return {"d1": rho.d1, "d2": rho.d2, "matrix": matrix_to_pairs(rho.matrix)}


def state_from_dict(data: dict) -> BipartiteState:
    try:
        d1, d2 = int(data["d1"]), int(data["d2"])
        raw = data["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError(f"state JSON needs integer d1, d2 and a matrix: {exc}") from None
    return BipartiteState(d1, d2, pairs_to_matrix(raw, d1 * d2))


def observable_to_dict(w: Observable) -> dict:
    return {"dim": w.dim, "matrix": matrix_to_pairs(w.matrix)}


def observable_from_dict(data: dict) -> Observable:
    if "alpha" in data or "n" in data:
        try:
            return qubit_observable(QubitObservableParams(data.get("alpha", 0.0), tuple(data["n"])))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"qubit observable shorthand needs 'alpha' and 'n': {exc}") from None
    try:
        dim = int(data["dim"])
        raw = data["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"observable JSON needs 'dim' and 'matrix': {exc}") from None
    return Observable(pairs_to_matrix(raw, dim))


def _load_json(path: Path):
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc})") from None


def load_state(spec: str) -> BipartiteState:
    """Resolve a registry name or read a state JSON file."""
    if is_registry_name(spec):
        return named_state(spec)
    path = Path(spec)
    if not path.is_file():
        raise InvalidStateError(f"{spec!r} is neither a known state name nor a readable file")
    return state_from_dict(_load_json(path))


_NAMED_OBSERVABLES = {"sx": SIGMA_X, "sy": SIGMA_Y, "sz": SIGMA_Z, "id": IDENTITY}


def load_observable(spec: str) -> Observable:
    """Parse ``sx``/``sy``/``sz``/``id`` (optionally negated), inline JSON, or a file."""
    text = spec.strip()
    sign = 1.0
    if text.startswith("-") and text[1:] in _NAMED_OBSERVABLES:
        sign, text = -1.0, text[1:]
    if text in _NAMED_OBSERVABLES:
        return Observable(sign * _NAMED_OBSERVABLES[text])
    if text.startswith("{"):
        try:
            return observable_from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid inline observable JSON: {exc}") from None
    path = Path(text)
    if not path.is_file():
        raise DomainError(f"{spec!r} is not an observable name, inline JSON or readable file")
    return observable_from_dict(_load_json(path))
