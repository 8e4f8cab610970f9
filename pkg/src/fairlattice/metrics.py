"""Per-level fairness statistics and the ISP variance benchmark.

Worst-case statistics per level: rate extrema, disparate impact
(min/max ratio) and statistical parity (max-min difference). Because every
subgroup's rate is a weighted average of the rates one level down, the
extrema can only narrow going up, so DI is non-decreasing and SP
non-increasing in the level.

Under intersectional statistical parity (label independent of every
attribute intersection) with n rows per vertex, the variance of level-k
rates is p(1-p)/n * 2**-k: it halves per level, and the observed-to-
theoretical ratio ("var ratio") is a scale-free bias measure per level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BenchmarkError,
    DataError,
    DegenerateVarianceError,
    EmptyLevelError,
)
from .tally import SUCCESS, CountTable


def level_extrema(table: CountTable, k: int, kind: str = SUCCESS) -> tuple[float, float]:
    """Minimum and maximum defined rate over the level-k subgroups.

    Subgroups with an undefined rate (zero denominator) are excluded.
    """
    rates = table.level_rates(k, kind)
    defined = rates[~np.isnan(rates)]
    if defined.size == 0:
        raise EmptyLevelError(f"every level-{k} subgroup has an undefined {kind} rate")
    return float(defined.min()), float(defined.max())


def disparate_impact(rate_min: float, rate_max: float) -> float | None:
    """Worst-case ratio min/max at a level; None when the max is 0."""
    if rate_max == 0:
        return None
    return rate_min / rate_max


def statistical_parity(rate_min: float, rate_max: float) -> float:
    """Worst-case difference max - min at a level."""
    return rate_max - rate_min


def accuracy_ratio_diff(table: CountTable, k: int) -> tuple[float | None, float]:
    """Worst-case accuracy ratio and difference at level k."""
    acc_min, acc_max = level_extrema(table, k, "accuracy")
    return disparate_impact(acc_min, acc_max), statistical_parity(acc_min, acc_max)


def empirical_variance(samples) -> float:
    """Population variance (divide by the sample count) of rate samples."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.size < 2:
        raise DegenerateVarianceError(
            f"variance needs at least 2 rate samples, got {arr.size}"
        )
    if np.isnan(arr).any():
        raise DataError("variance samples must all be defined rates")
    return float(np.mean((arr - arr.mean()) ** 2))


def level_variance(table: CountTable, k: int, kind: str = SUCCESS) -> float:
    """Population variance of the defined rates at level k (no subsampling)."""
    rates = table.level_rates(k, kind)
    return empirical_variance(rates[~np.isnan(rates)])


@dataclass(frozen=True)
class IspBenchmark:
    """Theoretical rate-variance benchmark under intersectional parity.

    ``p_tot`` is the overall success probability (in practice the empirical
    overall success rate) and ``n_per_vertex`` the balanced per-vertex
    sample count.
    """

    p_tot: float
    n_per_vertex: int

    @property
    def alpha(self) -> float:
        """Benchmark variance at vertex level: p(1-p)/n_per_vertex."""
        return self.p_tot * (1.0 - self.p_tot) / self.n_per_vertex


def isp_variance(bench: IspBenchmark, k: int) -> float:
    """Benchmark variance at level k: alpha * 2**-k (halves per level)."""
    return bench.alpha * 2.0 ** (-k)


def var_ratio(var: float, var_isp: float) -> float:
    """Observed/benchmark variance; ~1 is parity-consistent, >1 is bias."""
    if var_isp == 0:
        raise BenchmarkError("benchmark variance is 0; the ratio is undefined")
    return var / var_isp


def balanced_level_size(n_total: int, m: int, k: int) -> float:
    """Mean row count per level-k subgroup: n_total * 2**(k-m).

    This is the exact mean for any dataset (each row lies in C(m,k)
    level-k subgroups), and the exact per-subgroup count when the data is
    vertex-balanced.
    """
    return n_total * 2.0 ** (k - m)


def variance_lower_bound(bench: IspBenchmark, h_k: int, n_k: float) -> float:
    """Expected level variance lower bound under parity with uneven counts.

    ((h_k - 1) / h_k) * p(1-p) / n_k; tight exactly when all level-k counts
    are equal. With n_k the harmonic mean of the counts the bound is the
    expectation itself (for uncorrelated subgroups).
    """
    if h_k < 1:
        raise DataError(f"subgroup count must be >= 1, got {h_k}")
    return (h_k - 1) / h_k * bench.p_tot * (1.0 - bench.p_tot) / n_k


@dataclass(frozen=True)
class LevelReport:
    """Per-level audit record.

    Counts and rate extrema come from the full dataset; the variance family
    (var, log_var, var_isp, var_ratio) from balanced subsample repetitions.
    ``empty_count`` is the number of subgroups excluded for undefined rates.
    """

    level: int
    h_k: int
    n_avg: float
    n_min: int
    sr_min: float
    sr_max: float
    di: float | None
    sp: float
    var: float
    log_var: float
    var_isp: float
    var_ratio: float
    empty_count: int

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "h_k": self.h_k,
            "n_avg": self.n_avg,
            "n_min": self.n_min,
            "sr_min": self.sr_min,
            "sr_max": self.sr_max,
            "di": self.di,
            "sp": self.sp,
            "var": self.var,
            "log_var": self.log_var,
            "var_isp": self.var_isp,
            "var_ratio": self.var_ratio,
            "empty_count": self.empty_count,
        }


def safe_log(value: float) -> float:
    return math.log(value) if value > 0 else float("-inf")


def narrowing_violations(table: CountTable, kind: str = SUCCESS,
                         atol: float = 1e-12) -> list[tuple[int, str, float, float]]:
    """Levels where the rate extrema fail to narrow going up.

    Returns (level, which, value_at_level, value_below) tuples; empty when
    min rates are non-decreasing and max rates non-increasing in the level
    (undefined rates excluded). Levels where every rate is undefined are
    skipped together with the comparison that would involve them.
    """
    m = table.lattice.m
    extrema: list[tuple[float, float] | None] = []
    for k in range(m + 1):
        rates = table.level_rates(k, kind)
        defined = rates[~np.isnan(rates)]
        extrema.append(None if defined.size == 0 else (float(defined.min()), float(defined.max())))
    violations = []
    for k in range(1, m + 1):
        below, here = extrema[k - 1], extrema[k]
        if below is None or here is None:
            continue
        if here[0] < below[0] - atol:
            violations.append((k, "min", here[0], below[0]))
        if here[1] > below[1] + atol:
            violations.append((k, "max", here[1], below[1]))
    return violations


def sandwich_violations(table: CountTable, atol: float = 1e-12) -> list[int]:
    """Non-vertex subgroups whose rate escapes its children's rate envelope.

    For each star position with both children nonempty, the subgroup's
    success rate must lie between the two child rates; across positions the
    best lower bound is the max of the per-position minima and the best
    upper bound the min of the per-position maxima. Returns offending table
    indices (empty when the bound holds everywhere).
    """
    lat = table.lattice
    num, den = table.rate_arrays(SUCCESS)
    with np.errstate(invalid="ignore", divide="ignore"):
        rates = np.where(den > 0, num / den.astype(np.float64), np.nan)
    bad: list[int] = []
    for k in range(1, lat.m + 1):
        ids = lat.level_members(k)
        parent = rates[ids]
        lower = np.full(ids.size, -np.inf)
        upper = np.full(ids.size, np.inf)
        constrained = np.zeros(ids.size, dtype=bool)
        for pos in range(lat.m):
            place = lat.powers[pos]
            has_star = (ids // place) % 3 == 2
            if not has_star.any():
                continue
            sub = ids[has_star]
            r0 = rates[sub - 2 * place]
            r1 = rates[sub - place]
            both = ~(np.isnan(r0) | np.isnan(r1))
            lo = np.minimum(r0, r1)
            hi = np.maximum(r0, r1)
            sel = np.where(has_star)[0][both]
            lower[sel] = np.maximum(lower[sel], lo[both])
            upper[sel] = np.minimum(upper[sel], hi[both])
            constrained[sel] = True
        check = constrained & ~np.isnan(parent)
        escape = check & ((parent < lower - atol) | (parent > upper + atol))
        bad.extend(int(i) for i in ids[escape])
    return bad
