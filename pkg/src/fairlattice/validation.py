"""Input validation helpers shared by the dataset container and the estimator."""

from __future__ import annotations

import numpy as np

from .errors import DataError, MalformedRowError


def _coerce_binary(arr: np.ndarray, name: str) -> np.ndarray:
    if arr.dtype == bool:
        return arr.astype(np.uint8)
    if not np.issubdtype(arr.dtype, np.number):
        raise DataError(f"{name} must be numeric 0/1 values, got dtype {arr.dtype}")
    bad = (arr != 0) & (arr != 1)
    if bad.any():
        if arr.ndim == 2:
            row = int(np.argmax(bad.any(axis=1)))
            col = int(np.argmax(bad[row]))
            value = arr[row, col]
        else:
            row = int(np.argmax(bad))
            value = arr[row]
        raise MalformedRowError(
            f"{name} row {row}: values must be 0 or 1, got {value!r}", row=row
        )
    return arr.astype(np.uint8)


def check_binary_matrix(X, name: str = "X") -> np.ndarray:
    """Validate and return a (n_rows, n_attributes) uint8 matrix of 0/1."""
    arr = np.asarray(X)
    if arr.ndim != 2:
        raise DataError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DataError(f"{name} must have at least one row and one column")
    return _coerce_binary(arr, name)


def check_binary_vector(x, name: str = "y", expected_length: int | None = None) -> np.ndarray:
    """Validate and return a 1-d uint8 vector of 0/1."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DataError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if expected_length is not None and arr.shape[0] != expected_length:
        raise DataError(
            f"{name} has length {arr.shape[0]}, expected {expected_length}"
        )
    return _coerce_binary(arr, name)
