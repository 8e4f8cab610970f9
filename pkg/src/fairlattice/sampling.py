"""Balanced subsampling: draw the same number of rows from every vertex.

Balancing equalizes the per-subgroup counts the variance benchmark assumes,
and repeating the draw yields more, less correlated, rate samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, UnderpopulatedVertexError


# domain tag so subsample streams never collide with other modules'
# streams derived from the same user seed
_STREAM_TAG = 0x5375_6253  # "SubS"


@dataclass(frozen=True)
class SubsampleConfig:
    """Rows per vertex, number of repetitions, and the master seed."""

    n_sub: int
    n_repeats: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n_sub < 1:
            raise ConfigError(f"n_sub must be >= 1, got {self.n_sub}")
        if self.n_repeats < 1:
            raise ConfigError(f"n_repeats must be >= 1, got {self.n_repeats}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit non-negative integer, got {self.seed}")


def balanced_subsample(data: Dataset, cfg: SubsampleConfig,
                       allow_undersized: bool = False) -> list[Dataset]:
    """Draw ``cfg.n_repeats`` views with exactly ``cfg.n_sub`` rows per vertex.

    Each repetition draws uniformly without replacement within the vertex,
    independently across repetitions (child seeds spawned from ``cfg.seed``).
    A vertex with fewer than ``n_sub`` rows raises unless ``allow_undersized``
    is set, in which case all its rows are kept.
    """
    n_vertices = 2 ** data.m
    keys = data.vertex_bit_keys()
    counts = np.bincount(keys, minlength=n_vertices)
    if not allow_undersized and (counts < cfg.n_sub).any():
        vertex = int(np.argmax(counts < cfg.n_sub))
        pattern = np.binary_repr(vertex, width=data.m)
        raise UnderpopulatedVertexError(
            f"vertex {pattern} has {int(counts[vertex])} rows, fewer than "
            f"n_sub={cfg.n_sub}",
            vertex=pattern,
            count=int(counts[vertex]),
        )
    offsets = np.concatenate(([0], np.cumsum(counts)))
    takes = np.minimum(counts, cfg.n_sub)

    views = []
    for child in np.random.SeedSequence([cfg.seed, _STREAM_TAG]).spawn(cfg.n_repeats):
        rng = np.random.default_rng(child)
        # rows grouped by vertex, randomly ordered inside each group
        ordered = np.lexsort((rng.random(data.n), keys))
        picks = np.concatenate([
            ordered[offsets[v]:offsets[v] + takes[v]]
            for v in range(n_vertices)
            if takes[v] > 0
        ])
        views.append(data.subset(picks))
    return views
