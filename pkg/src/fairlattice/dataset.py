"""Immutable container for binarized audit data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_binary_matrix, check_binary_vector


@dataclass(frozen=True)
class Dataset:
    """Rows of M binary protected attributes with a binary label.

    ``y_pred`` is optional; when present, confusion-matrix tallies become
    available. Arrays are validated and frozen at construction, so a Dataset
    can be shared freely.
    """

    attrs: np.ndarray
    y_true: np.ndarray
    y_pred: np.ndarray | None = None

    def __post_init__(self):
        attrs = check_binary_matrix(self.attrs, "attrs")
        y_true = check_binary_vector(self.y_true, "y_true", attrs.shape[0])
        y_pred = self.y_pred
        if y_pred is not None:
            y_pred = check_binary_vector(y_pred, "y_pred", attrs.shape[0])
            y_pred.setflags(write=False)
        attrs.setflags(write=False)
        y_true.setflags(write=False)
        object.__setattr__(self, "attrs", attrs)
        object.__setattr__(self, "y_true", y_true)
        object.__setattr__(self, "y_pred", y_pred)

    @property
    def n(self) -> int:
        return self.attrs.shape[0]

    @property
    def m(self) -> int:
        return self.attrs.shape[1]

    @property
    def has_predictions(self) -> bool:
        return self.y_pred is not None

    def subset(self, rows: np.ndarray) -> "Dataset":
        """New Dataset holding the given rows (in the given order)."""
        pred = None if self.y_pred is None else self.y_pred[rows]
        return Dataset(self.attrs[rows], self.y_true[rows], pred)

    def vertex_bit_keys(self) -> np.ndarray:
        """Per-row vertex id in 0..2**m-1 (attribute 0 most significant)."""
        bits = 2 ** np.arange(self.m - 1, -1, -1, dtype=np.int64)
        return self.attrs.astype(np.int64) @ bits
