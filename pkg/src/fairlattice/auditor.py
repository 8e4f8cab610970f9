"""End-to-end audit: tally, propagate, subsample, and score every level.

The audit combines two views of the data. Counts and rate extrema (and the
derived worst-case ratio/difference) come from the full dataset. The
variance family comes from balanced subsample repetitions, because the
theoretical benchmark assumes equal per-vertex counts and the repetitions
supply extra, less correlated rate samples.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .dataset import Dataset
from .lattice import Lattice
from .metrics import (
    IspBenchmark,
    LevelReport,
    disparate_impact,
    empirical_variance,
    isp_variance,
    level_extrema,
    safe_log,
    statistical_parity,
    var_ratio,
)
from .sampling import SubsampleConfig, balanced_subsample
from .tally import CountTable, propagate, tally_confusion, tally_vertices

#: var_ratio band treated as consistent with intersectional statistical parity.
ISP_BAND = (0.8, 1.25)

_BAND_TEXT = {
    "below-benchmark": "variance below the parity benchmark (possible bias mitigation)",
    "isp-consistent": "consistent with intersectional statistical parity",
    "intersectional-bias": "evidence of intersectional bias",
}


def interpret_var_ratio(value: float, band: tuple[float, float] = ISP_BAND) -> str:
    """Band label for a vertex-level var ratio: below / consistent / bias."""
    if value < band[0]:
        return "below-benchmark"
    if value <= band[1]:
        return "isp-consistent"
    return "intersectional-bias"


@dataclass(frozen=True)
class AuditReport:
    """Audit result: run metadata plus one record per level."""

    source: str
    m: int
    n: int
    seed: int
    n_sub: int
    n_repeats: int
    p_tot: float
    alpha: float
    levels: tuple[LevelReport, ...]
    var_ratio_0: float
    interpretation: str
    n_dropped_missing: int = 0
    warnings: tuple[str, ...] = ()

    @property
    def interpretation_text(self) -> str:
        return _BAND_TEXT[self.interpretation]

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "m": self.m,
            "n": self.n,
            "seed": self.seed,
            "n_sub": self.n_sub,
            "n_repeats": self.n_repeats,
            "n_dropped_missing": self.n_dropped_missing,
            "p_tot": self.p_tot,
            "alpha": self.alpha,
            "var_ratio_0": self.var_ratio_0,
            "interpretation": self.interpretation,
            "interpretation_text": self.interpretation_text,
            "warnings": list(self.warnings),
            "levels": [lr.to_dict() for lr in self.levels],
        }

    def to_json(self) -> str:
        # JSON has no inf/nan literals; map them to null explicitly
        def clean(obj):
            if isinstance(obj, dict):
                return {k: clean(v) for k, v in obj.items()}
            if isinstance(obj, list):
                return [clean(v) for v in obj]
            if isinstance(obj, float) and not math.isfinite(obj):
                return None
            return obj

        return json.dumps(clean(self.to_dict()), indent=2) + "\n"


@dataclass(frozen=True)
class AuditResult:
    """Report plus the propagated full-data table (for dumps and follow-ups)."""

    report: AuditReport
    table: CountTable


def audit_dataset(data: Dataset, n_sub: int, n_repeats: int = 20, seed: int = 0,
                  allow_sparse: bool = False, max_m: int | None = None,
                  source: str = "<memory>", n_dropped_missing: int = 0) -> AuditResult:
    """Run the full audit pipeline over an in-memory dataset."""
    lattice = Lattice(data.m, max_m=max_m)
    if data.has_predictions:
        table = propagate(tally_confusion(data, lattice=lattice))
    else:
        table = propagate(tally_vertices(data, lattice=lattice))

    warnings: list[str] = []
    vertex_counts = table.n[lattice.vertex_indices()]
    short = int((vertex_counts < n_sub).sum())
    if allow_sparse and short:
        warnings.append(
            f"{short} vertices hold fewer than n_sub={n_sub} rows; "
            "all their rows were used and the variance benchmark is approximate"
        )

    views = balanced_subsample(
        data, SubsampleConfig(n_sub=n_sub, n_repeats=n_repeats, seed=seed),
        allow_undersized=allow_sparse,
    )
    samples: list[list[np.ndarray]] = [[] for _ in range(data.m + 1)]
    positives = 0
    rows = 0
    for view in views:
        view_table = propagate(tally_vertices(view, lattice=lattice))
        positives += int(view_table.n_pos[lattice.main_index])
        rows += int(view_table.n[lattice.main_index])
        for k in range(data.m + 1):
            samples[k].append(view_table.level_rates(k))
    p_tot = positives / rows
    bench = IspBenchmark(p_tot=p_tot, n_per_vertex=n_sub)

    reports = []
    for k in range(data.m + 1):
        ids = lattice.level_members(k)
        counts_k = table.n[ids]
        empty_count = int(np.isnan(table.level_rates(k)).sum())
        sr_min, sr_max = level_extrema(table, k)
        pooled = np.concatenate(samples[k])
        pooled = pooled[~np.isnan(pooled)]
        var = empirical_variance(pooled)
        v_isp = isp_variance(bench, k)
        reports.append(LevelReport(
            level=k,
            h_k=int(ids.size),
            n_avg=float(counts_k.mean()),
            n_min=int(counts_k.min()),
            sr_min=sr_min,
            sr_max=sr_max,
            di=disparate_impact(sr_min, sr_max),
            sp=statistical_parity(sr_min, sr_max),
            var=var,
            log_var=safe_log(var),
            var_isp=v_isp,
            var_ratio=var_ratio(var, v_isp),
            empty_count=empty_count,
        ))

    headline = reports[0].var_ratio
    report = AuditReport(
        source=source,
        m=data.m,
        n=data.n,
        seed=seed,
        n_sub=n_sub,
        n_repeats=n_repeats,
        p_tot=p_tot,
        alpha=bench.alpha,
        levels=tuple(reports),
        var_ratio_0=headline,
        interpretation=interpret_var_ratio(headline),
        n_dropped_missing=n_dropped_missing,
        warnings=tuple(warnings),
    )
    return AuditResult(report=report, table=table)


LEVELS_CSV_COLUMNS = (
    "level", "h_k", "n_avg", "n_min", "sr_min", "sr_max", "di", "sp",
    "var", "log_var", "var_isp", "var_ratio",
)


def _csv_cell(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def levels_csv(report: AuditReport) -> str:
    """Plot-ready per-level CSV (one row per level, fixed column set)."""
    lines = [",".join(LEVELS_CSV_COLUMNS)]
    for lr in report.levels:
        record = lr.to_dict()
        lines.append(",".join(_csv_cell(record[c]) for c in LEVELS_CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def subgroups_csv(table: CountTable) -> str:
    """Full per-subgroup dump: pattern, level, counts and success rate."""
    lat = table.lattice
    confusion = table.confusion_mode
    header = ["pattern", "level", "n", "n_pos", "sr"]
    if confusion:
        header += ["tp", "fp", "tn", "fn"]
    lines = [",".join(header)]
    for index in range(lat.size):
        sr = table.success_rate(index)
        cells = [
            str(lat.spec(index)),
            str(int(lat.levels[index])),
            str(int(table.n[index])),
            str(int(table.n_pos[index])),
            _csv_cell(sr),
        ]
        if confusion:
            cells += [str(int(arr[index])) for arr in (table.tp, table.fp, table.tn, table.fn)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


class IntersectionalFairnessAuditor(BaseEstimator):
    """Scikit-learn style auditor over all intersectional subgroups.

    ``fit(X, y)`` takes an (n_samples, n_attributes) matrix of binary
    protected attributes and a binary outcome vector, then exposes the audit
    as fitted attributes. Predictions can be supplied alongside the labels
    to enable confusion-matrix rates on the fitted count table.

    Parameters
    ----------
    n_sub : int
        Rows drawn per vertex in each balanced subsample repetition.
    n_repeats : int
        Number of subsample repetitions pooled into the variance estimate.
    seed : int
        Master seed; all randomness in the audit derives from it.
    allow_sparse : bool
        Keep going when vertices hold fewer than ``n_sub`` rows (their rows
        are all used) instead of raising.
    max_m : int or None
        Override for the attribute-count capacity guard.

    Attributes
    ----------
    report_ : AuditReport
    level_reports_ : tuple of LevelReport
    var_ratio_ : float
        Headline vertex-level variance ratio.
    interpretation_ : str
    count_table_ : CountTable
        Propagated full-data table (confusion mode when y_pred was given).
    lattice_ : Lattice
    n_features_in_ : int
    """

    def __init__(self, n_sub: int = 100, n_repeats: int = 20, seed: int = 0,
                 allow_sparse: bool = False, max_m: int | None = None):
        self.n_sub = n_sub
        self.n_repeats = n_repeats
        self.seed = seed
        self.allow_sparse = allow_sparse
        self.max_m = max_m

    def fit(self, X, y, y_pred=None):
        data = Dataset(np.asarray(X), np.asarray(y),
                       None if y_pred is None else np.asarray(y_pred))
        result = audit_dataset(
            data,
            n_sub=self.n_sub,
            n_repeats=self.n_repeats,
            seed=self.seed,
            allow_sparse=self.allow_sparse,
            max_m=self.max_m,
        )
        self.n_features_in_ = data.m
        self.lattice_ = result.table.lattice
        self.count_table_ = result.table
        self.report_ = result.report
        self.level_reports_ = result.report.levels
        self.var_ratio_ = result.report.var_ratio_0
        self.interpretation_ = result.report.interpretation
        return self
