"""Synthetic benchmark datasets: per-vertex Bernoulli labels, optional bias.

Every vertex v draws its size (fixed, or size_unit * R with R uniform in
1..size_multiplier_max) and its labels i.i.d. Bernoulli(p(v)). With
delta == 0 all vertices share p_base, so the label is independent of every
attribute intersection. Bias is injected by moving ``n_biased_low``
vertices to p_base - delta and ``n_biased_high`` to p_base + delta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError

PLACEMENTS = ("ends", "random")


@dataclass(frozen=True)
class SyntheticConfig:
    m: int = 10
    p_base: float = 0.5
    delta: float = 0.0
    n_biased_low: int = 0
    n_biased_high: int = 0
    seed: int = 0
    vertex_size: int | None = None  # fixed rows per vertex; None -> size_unit * R
    size_unit: int = 200
    size_multiplier_max: int = 10
    bias_placement: str = "ends"

    def __post_init__(self):
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if self.delta < 0:
            raise ConfigError(f"delta must be >= 0, got {self.delta}")
        if not (0.0 <= self.p_base - self.delta and self.p_base + self.delta <= 1.0):
            raise ConfigError(
                f"success probabilities p_base +/- delta must stay in [0, 1], got "
                f"{self.p_base} +/- {self.delta}"
            )
        if self.n_biased_low < 0 or self.n_biased_high < 0:
            raise ConfigError("biased vertex counts must be >= 0")
        if self.n_biased_low + self.n_biased_high > 2 ** self.m:
            raise ConfigError(
                f"{self.n_biased_low} + {self.n_biased_high} biased vertices exceed "
                f"the {2 ** self.m} vertices of m={self.m}"
            )
        if self.bias_placement not in PLACEMENTS:
            raise ConfigError(
                f"bias_placement must be one of {PLACEMENTS}, got {self.bias_placement!r}"
            )
        if self.vertex_size is not None and self.vertex_size < 1:
            raise ConfigError(f"vertex_size must be >= 1, got {self.vertex_size}")
        if self.size_unit < 1 or self.size_multiplier_max < 1:
            raise ConfigError("size_unit and size_multiplier_max must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit non-negative integer, got {self.seed}")


# domain tag so generator streams never collide with other modules'
# streams derived from the same user seed
_STREAM_TAG = 0x53796E_47  # "SynG"


def _seed_children(cfg: SyntheticConfig):
    placement, sizes, labels = np.random.SeedSequence([cfg.seed, _STREAM_TAG]).spawn(3)
    return placement, sizes, labels


def vertex_success_probabilities(cfg: SyntheticConfig) -> np.ndarray:
    """p(v) for every vertex, in lexicographic (binary) vertex order.

    ``ends`` placement biases the first ``n_biased_low`` and last
    ``n_biased_high`` vertices of that order; ``random`` placement scatters
    the two (disjoint) sets by a seeded shuffle.
    """
    n_vertices = 2 ** cfg.m
    p = np.full(n_vertices, cfg.p_base, dtype=np.float64)
    if cfg.delta == 0.0 or (cfg.n_biased_low == 0 and cfg.n_biased_high == 0):
        if cfg.bias_placement == "random":
            _seed_children(cfg)  # keep the stream layout placement-independent
        return p
    if cfg.bias_placement == "ends":
        p[:cfg.n_biased_low] = cfg.p_base - cfg.delta
        p[n_vertices - cfg.n_biased_high:] = cfg.p_base + cfg.delta
    else:
        placement_seed, _, _ = _seed_children(cfg)
        rng = np.random.default_rng(placement_seed)
        picked = rng.permutation(n_vertices)[:cfg.n_biased_low + cfg.n_biased_high]
        p[picked[:cfg.n_biased_low]] = cfg.p_base - cfg.delta
        p[picked[cfg.n_biased_low:]] = cfg.p_base + cfg.delta
    return p


def vertex_patterns(m: int) -> np.ndarray:
    """(2**m, m) matrix of vertex attribute values, lexicographic order."""
    ids = np.arange(2 ** m, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((ids[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def generate(cfg: SyntheticConfig) -> Dataset:
    """Generate the dataset described by ``cfg``; deterministic given the seed."""
    _, sizes_seed, labels_seed = _seed_children(cfg)
    n_vertices = 2 ** cfg.m
    p = vertex_success_probabilities(cfg)

    if cfg.vertex_size is not None:
        sizes = np.full(n_vertices, cfg.vertex_size, dtype=np.int64)
    else:
        multipliers = np.random.default_rng(sizes_seed).integers(
            1, cfg.size_multiplier_max + 1, size=n_vertices
        )
        sizes = cfg.size_unit * multipliers

    attrs = np.repeat(vertex_patterns(cfg.m), sizes, axis=0)
    row_p = np.repeat(p, sizes)
    y = (np.random.default_rng(labels_seed).random(row_p.size) < row_p).astype(np.uint8)
    return Dataset(attrs, y)


def isp_benchmark_config(seed: int = 0, m: int = 10) -> SyntheticConfig:
    """Fair benchmark: every vertex at p=0.5, sizes 200 * U{1..10}."""
    return SyntheticConfig(m=m, p_base=0.5, delta=0.0, seed=seed)


def biased_benchmark_config(delta: float, seed: int = 0, m: int = 10) -> SyntheticConfig:
    """Biased benchmark: 100 vertices at 0.5-delta, 100 at 0.5+delta."""
    return SyntheticConfig(
        m=m, p_base=0.5, delta=delta, n_biased_low=100, n_biased_high=100, seed=seed
    )
