"""The subgroup lattice: trit-coded intersectional subgroups of M binary attributes.

A subgroup fixes some attributes to 0/1 and leaves the rest unspecified,
written ``*``. With M attributes there are 3**M subgroups. The number of
stars is the subgroup's *level*: level 0 subgroups (vertices) fix every
attribute, level M is the whole dataset. Each subgroup maps to a dense
table index by reading its trits as a base-3 number (attribute 0 is the
most significant digit, 0/1/* -> digit 0/1/2).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from .errors import CapacityError, ConfigError, InvalidSplitError, LevelBoundsError

ZERO, ONE, STAR = 0, 1, 2

_TRIT_CHARS = {ZERO: "0", ONE: "1", STAR: "*"}
_CHAR_TRITS = {"0": ZERO, "1": ONE, "*": STAR}

#: Largest attribute count for which dense 3**m tables are allocated by default.
DEFAULT_MAX_M = 16
MAX_M_ENV_VAR = "FAIRLATTICE_MAX_M"


def max_table_m(override: int | None = None) -> int:
    """Effective cap on the attribute count (override > env var > default)."""
    if override is not None:
        return int(override)
    env = os.environ.get(MAX_M_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{MAX_M_ENV_VAR} must be an integer, got {env!r}") from None
    return DEFAULT_MAX_M


def check_capacity(m: int, max_m: int | None = None) -> None:
    """Fail fast before allocating a 3**m table that would blow the budget."""
    if m < 1:
        raise ConfigError(f"attribute count must be at least 1, got {m}")
    limit = max_table_m(max_m)
    if m > limit:
        raise CapacityError(
            f"m={m} needs 3**{m} = {3 ** m} table entries, over the cap m={limit}; "
            f"set {MAX_M_ENV_VAR} or pass max_m to raise it"
        )


@dataclass(frozen=True)
class SubgroupSpec:
    """One intersectional subgroup, coded as one trit per attribute."""

    codes: tuple[int, ...]

    def __post_init__(self):
        codes = tuple(int(c) for c in self.codes)
        if not codes:
            raise ConfigError("a subgroup needs at least one attribute")
        if any(c not in (ZERO, ONE, STAR) for c in codes):
            raise ConfigError(f"trit codes must be in {{0, 1, 2}}, got {codes!r}")
        object.__setattr__(self, "codes", codes)

    @property
    def m(self) -> int:
        return len(self.codes)

    @property
    def level(self) -> int:
        """Number of unspecified attributes (stars)."""
        return sum(1 for c in self.codes if c == STAR)

    @property
    def is_vertex(self) -> bool:
        return self.level == 0

    @property
    def index(self) -> int:
        """Dense table index: trits read as a base-3 number, attribute 0 first."""
        value = 0
        for c in self.codes:
            value = value * 3 + c
        return value

    @classmethod
    def from_index(cls, index: int, m: int) -> "SubgroupSpec":
        if not 0 <= index < 3 ** m:
            raise ConfigError(f"index {index} outside 0..3**{m}-1")
        codes = []
        for _ in range(m):
            index, digit = divmod(index, 3)
            codes.append(digit)
        return cls(tuple(reversed(codes)))

    @classmethod
    def from_string(cls, text: str) -> "SubgroupSpec":
        """Parse a pattern such as ``"01*"``."""
        try:
            return cls(tuple(_CHAR_TRITS[ch] for ch in text))
        except KeyError as exc:
            raise ConfigError(f"invalid pattern character {exc.args[0]!r} in {text!r}") from None

    def first_star(self) -> int | None:
        """Lowest star position, or None for a vertex."""
        for i, c in enumerate(self.codes):
            if c == STAR:
                return i
        return None

    def split(self, star_position: int) -> tuple["SubgroupSpec", "SubgroupSpec"]:
        """Resolve the star at ``star_position`` to 0 and to 1.

        The two children partition this subgroup and sit one level below.
        """
        if not 0 <= star_position < self.m or self.codes[star_position] != STAR:
            raise InvalidSplitError(
                f"position {star_position} of {self} is not a star"
            )
        low = list(self.codes)
        high = list(self.codes)
        low[star_position] = ZERO
        high[star_position] = ONE
        return SubgroupSpec(tuple(low)), SubgroupSpec(tuple(high))

    def matches(self, values: Sequence[int]) -> bool:
        """True when a row's attribute values fall inside this subgroup."""
        if len(values) != self.m:
            raise ConfigError(f"expected {self.m} attribute values, got {len(values)}")
        return all(c == STAR or c == v for c, v in zip(self.codes, values))

    def vertices(self) -> Iterator["SubgroupSpec"]:
        """All vertices covered by this subgroup, ascending index order."""
        stars = [i for i, c in enumerate(self.codes) if c == STAR]
        for bits in product((ZERO, ONE), repeat=len(stars)):
            codes = list(self.codes)
            for pos, bit in zip(stars, bits):
                codes[pos] = bit
            yield SubgroupSpec(tuple(codes))

    def __str__(self) -> str:
        return "".join(_TRIT_CHARS[c] for c in self.codes)


@dataclass(frozen=True)
class LatticeShape:
    """Size summary of the lattice for a given attribute count."""

    m: int
    h_per_level: tuple[int, ...]
    h_total: int
    edge_count: int


def level_size(m: int, k: int) -> int:
    """Number of subgroups at level k: C(m, k) * 2**(m-k)."""
    if m < 1:
        raise ConfigError(f"attribute count must be at least 1, got {m}")
    if not 0 <= k <= m:
        raise LevelBoundsError(f"level {k} outside 0..{m}")
    return math.comb(m, k) * 2 ** (m - k)


def shape(m: int, max_m: int | None = None) -> LatticeShape:
    """Level sizes, total subgroup count and split-graph edge count.

    Every level-k subgroup splits 2k ways one level down, so the edge count
    is sum(2k * C(m,k) * 2**(m-k)) for k in 1..m, which is at most 2m * 3**m.
    """
    check_capacity(m, max_m)
    per_level = tuple(level_size(m, k) for k in range(m + 1))
    edges = sum(2 * k * per_level[k] for k in range(1, m + 1))
    return LatticeShape(m=m, h_per_level=per_level, h_total=3 ** m, edge_count=edges)


def enumerate_level(m: int, k: int) -> list[SubgroupSpec]:
    """All subgroups of level k, in ascending table-index order."""
    if m < 1:
        raise ConfigError(f"attribute count must be at least 1, got {m}")
    if not 0 <= k <= m:
        raise LevelBoundsError(f"level {k} outside 0..{m}")
    specs = []
    for stars in combinations(range(m), k):
        star_set = set(stars)
        fixed = [i for i in range(m) if i not in star_set]
        for bits in product((ZERO, ONE), repeat=m - k):
            codes = [STAR] * m
            for pos, bit in zip(fixed, bits):
                codes[pos] = bit
            specs.append(SubgroupSpec(tuple(codes)))
    specs.sort(key=lambda s: s.index)
    return specs


class Lattice:
    """Precomputed dense index structure for all 3**m subgroups.

    Holds, per table index, the level and the first star position, plus a
    level-sorted ordering, so that tallies and level scans are plain
    vectorized gathers. All arrays are read-only after construction; the
    object is safe to share across threads.
    """

    def __init__(self, m: int, max_m: int | None = None):
        check_capacity(m, max_m)
        self.m = m
        self.size = 3 ** m
        self.powers = 3 ** np.arange(m - 1, -1, -1, dtype=np.int64)

        idx = np.arange(self.size, dtype=np.int64)
        levels = np.zeros(self.size, dtype=np.int8)
        first_star = np.full(self.size, -1, dtype=np.int8)
        for pos in range(m):
            star = (idx // self.powers[pos]) % 3 == STAR
            levels[star] += 1
            first_star[star & (first_star < 0)] = pos
        self.levels = levels
        self.first_star = first_star
        # stable sort keeps ascending index order within each level
        self.level_order = np.argsort(levels, kind="stable")
        counts = np.bincount(levels, minlength=m + 1)
        self.level_offsets = np.concatenate(([0], np.cumsum(counts)))
        for arr in (self.powers, self.levels, self.first_star, self.level_order,
                    self.level_offsets):
            arr.setflags(write=False)

    def level_members(self, k: int) -> np.ndarray:
        """Table indices of all level-k subgroups, ascending."""
        if not 0 <= k <= self.m:
            raise LevelBoundsError(f"level {k} outside 0..{self.m}")
        return self.level_order[self.level_offsets[k]:self.level_offsets[k + 1]]

    def vertex_indices(self) -> np.ndarray:
        """Table indices of the 2**m vertices, ascending (== binary order)."""
        return self.level_members(0)

    def row_vertex_index(self, attrs: np.ndarray) -> np.ndarray:
        """Table index of each row's fully specified subgroup."""
        return attrs.astype(np.int64) @ self.powers

    def spec(self, index: int) -> SubgroupSpec:
        return SubgroupSpec.from_index(int(index), self.m)

    def shape(self) -> LatticeShape:
        return shape(self.m, max_m=self.m)

    @property
    def main_index(self) -> int:
        """Table index of the all-stars subgroup (the whole dataset)."""
        return self.size - 1
