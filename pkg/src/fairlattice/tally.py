"""Counting engine: one pass over the rows, then upward propagation.

Counts are tallied once at vertex level and pushed up the lattice with the
split identity: for any subgroup x and any of its stars, the two children
obtained by resolving that star partition x, so every count of x is the sum
of the two child counts. Counts stay exact integers; rates are derived at
query time, so additivity holds with no rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, DataError, ModeError
from .lattice import Lattice, SubgroupSpec

SUCCESS = "success"
CONFUSION_KINDS = ("accuracy", "tpr", "fpr", "tnr", "fnr", "precision")
RATE_KINDS = (SUCCESS,) + CONFUSION_KINDS


@dataclass
class CountTable:
    """Per-subgroup tallies for all 3**m table entries.

    ``n`` and ``n_pos`` are total and positive-label counts. In confusion
    mode the four confusion-cell arrays are populated as well. Empty
    subgroups hold count 0; their rates are undefined (None scalar / NaN
    vector), never an error.
    """

    lattice: Lattice
    n: np.ndarray
    n_pos: np.ndarray
    tp: np.ndarray | None = None
    fp: np.ndarray | None = None
    tn: np.ndarray | None = None
    fn: np.ndarray | None = None
    propagated: bool = False
    op_count: int = 0

    @property
    def confusion_mode(self) -> bool:
        return self.tp is not None

    @property
    def m(self) -> int:
        return self.lattice.m

    def _arrays(self) -> list[np.ndarray]:
        arrays = [self.n, self.n_pos]
        if self.confusion_mode:
            arrays += [self.tp, self.fp, self.tn, self.fn]
        return arrays

    def _freeze(self):
        for arr in self._arrays():
            arr.setflags(write=False)

    def rate_arrays(self, kind: str = SUCCESS) -> tuple[np.ndarray, np.ndarray]:
        """(numerator, denominator) count arrays for a rate kind."""
        if kind == SUCCESS:
            return self.n_pos, self.n
        if kind not in CONFUSION_KINDS:
            raise ValueError(f"unknown rate kind {kind!r}; expected one of {RATE_KINDS}")
        if not self.confusion_mode:
            raise ModeError(f"rate {kind!r} needs a confusion-mode tally (predictions)")
        if kind == "accuracy":
            return self.tp + self.tn, self.n
        if kind == "tpr":
            return self.tp, self.tp + self.fn
        if kind == "fpr":
            return self.fp, self.fp + self.tn
        if kind == "tnr":
            return self.tn, self.fp + self.tn
        if kind == "fnr":
            return self.fn, self.tp + self.fn
        return self.tp, self.tp + self.fp  # precision

    def rate(self, spec: SubgroupSpec | int, kind: str = SUCCESS) -> float | None:
        """Rate of one subgroup, or None when its denominator is 0."""
        self._require_propagated()
        index = spec.index if isinstance(spec, SubgroupSpec) else int(spec)
        num, den = self.rate_arrays(kind)
        d = int(den[index])
        return None if d == 0 else int(num[index]) / d

    def success_rate(self, spec: SubgroupSpec | int) -> float | None:
        return self.rate(spec, SUCCESS)

    @property
    def sr_total(self) -> float | None:
        """Success rate of the whole dataset (the all-stars subgroup)."""
        return self.success_rate(self.lattice.main_index)

    def level_rates(self, k: int, kind: str = SUCCESS) -> np.ndarray:
        """Rates of every level-k subgroup, NaN where undefined."""
        self._require_propagated()
        ids = self.lattice.level_members(k)
        num, den = self.rate_arrays(kind)
        dk = den[ids].astype(np.float64)
        with np.errstate(invalid="ignore", divide="ignore"):
            rates = np.where(dk > 0, num[ids] / dk, np.nan)
        return rates

    def _require_propagated(self):
        if not self.propagated:
            raise DataError("table holds vertex tallies only; call propagate() first")


def _vertex_scatter(lattice: Lattice, per_vertex: np.ndarray) -> np.ndarray:
    table = np.zeros(lattice.size, dtype=np.int64)
    table[lattice.vertex_indices()] = per_vertex
    return table


def tally_vertices(data: Dataset, lattice: Lattice | None = None,
                   max_m: int | None = None) -> CountTable:
    """Tally row and positive-label counts per vertex, in one dataset pass.

    Vertices absent from the data keep count 0.
    """
    lattice = lattice if lattice is not None else Lattice(data.m, max_m=max_m)
    if lattice.m != data.m:
        raise ConfigError(f"dataset has m={data.m} attributes, lattice has m={lattice.m}")
    keys = data.vertex_bit_keys()
    n_vertices = 2 ** data.m
    combined = np.bincount((keys << 1) | data.y_true, minlength=2 * n_vertices)
    combined = combined.reshape(n_vertices, 2)
    return CountTable(
        lattice=lattice,
        n=_vertex_scatter(lattice, combined.sum(axis=1)),
        n_pos=_vertex_scatter(lattice, combined[:, 1]),
    )


def tally_confusion(data: Dataset, lattice: Lattice | None = None,
                    max_m: int | None = None) -> CountTable:
    """Tally confusion-matrix cells per vertex, in one dataset pass.

    The success count used for accuracy is tp + tn, i.e. the count of rows
    whose prediction equals the label.
    """
    if not data.has_predictions:
        raise ModeError("confusion tally needs y_pred")
    lattice = lattice if lattice is not None else Lattice(data.m, max_m=max_m)
    if lattice.m != data.m:
        raise ConfigError(f"dataset has m={data.m} attributes, lattice has m={lattice.m}")
    keys = data.vertex_bit_keys()
    n_vertices = 2 ** data.m
    combined = (keys << 2) | (data.y_true.astype(np.int64) << 1) | data.y_pred
    cells = np.bincount(combined, minlength=4 * n_vertices).reshape(n_vertices, 4)
    tn, fp, fn, tp = cells[:, 0], cells[:, 1], cells[:, 2], cells[:, 3]
    return CountTable(
        lattice=lattice,
        n=_vertex_scatter(lattice, cells.sum(axis=1)),
        n_pos=_vertex_scatter(lattice, tp + fn),
        tp=_vertex_scatter(lattice, tp),
        fp=_vertex_scatter(lattice, fp),
        tn=_vertex_scatter(lattice, tn),
        fn=_vertex_scatter(lattice, fn),
    )


def propagate(table: CountTable) -> CountTable:
    """Fill every non-vertex entry by summing its two first-star children.

    Runs level by level upward, so each entry is computed once from already
    final values; two child reads per filled entry, i.e. at most two graph
    edges per subgroup and never the same edge twice.
    """
    if table.propagated:
        return table
    lat = table.lattice
    arrays = table._arrays()
    for k in range(1, lat.m + 1):
        ids = lat.level_members(k)
        place = lat.powers[lat.first_star[ids]]
        child0 = ids - 2 * place
        child1 = ids - place
        for arr in arrays:
            arr[ids] = arr[child0] + arr[child1]
    table.op_count += 2 * int(lat.size - 2 ** lat.m)
    table.propagated = True
    table._freeze()
    return table
