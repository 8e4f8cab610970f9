"""fairlattice: intersectional fairness auditing over the full subgroup lattice.

Builds the complete {0,1,*}^M subgroup lattice of M binary protected
attributes, tallies outcome (and optionally confusion) counts for every
subgroup with one dataset pass plus upward propagation, and reports
per-level fairness statistics including the variance-ratio family measured
against the intersectional statistical parity benchmark.
"""

from .auditor import (
    AuditReport,
    AuditResult,
    IntersectionalFairnessAuditor,
    audit_dataset,
    interpret_var_ratio,
    levels_csv,
    subgroups_csv,
)
from .dataset import Dataset
from .errors import (
    BenchmarkError,
    CapacityError,
    ConfigError,
    DataError,
    DegenerateVarianceError,
    EmptyLevelError,
    FairlatticeError,
    InvalidSplitError,
    LevelBoundsError,
    MalformedRowError,
    MappingError,
    ModeError,
    UnderpopulatedVertexError,
)
from .ingest import (
    BinarizationConfig,
    IngestResult,
    LabelRule,
    ThresholdRule,
    ValueSetRule,
    adult_preset,
    identity_config,
    load_config,
    load_csv,
    write_binary_csv,
)
from .lattice import (
    ONE,
    STAR,
    ZERO,
    Lattice,
    LatticeShape,
    SubgroupSpec,
    enumerate_level,
    level_size,
    shape,
)
from .metrics import (
    IspBenchmark,
    LevelReport,
    accuracy_ratio_diff,
    balanced_level_size,
    disparate_impact,
    empirical_variance,
    isp_variance,
    level_extrema,
    level_variance,
    narrowing_violations,
    sandwich_violations,
    statistical_parity,
    var_ratio,
    variance_lower_bound,
)
from .oracle import brute_force_counts
from .sampling import SubsampleConfig, balanced_subsample
from .synth import (
    SyntheticConfig,
    biased_benchmark_config,
    generate,
    isp_benchmark_config,
    vertex_success_probabilities,
)
from .tally import (
    CountTable,
    propagate,
    tally_confusion,
    tally_vertices,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "AuditResult",
    "BenchmarkError",
    "BinarizationConfig",
    "CapacityError",
    "ConfigError",
    "CountTable",
    "DataError",
    "Dataset",
    "DegenerateVarianceError",
    "EmptyLevelError",
    "FairlatticeError",
    "IngestResult",
    "IntersectionalFairnessAuditor",
    "InvalidSplitError",
    "IspBenchmark",
    "LabelRule",
    "Lattice",
    "LatticeShape",
    "LevelBoundsError",
    "LevelReport",
    "MalformedRowError",
    "MappingError",
    "ModeError",
    "ONE",
    "STAR",
    "SubgroupSpec",
    "SubsampleConfig",
    "SyntheticConfig",
    "ThresholdRule",
    "UnderpopulatedVertexError",
    "ValueSetRule",
    "ZERO",
    "accuracy_ratio_diff",
    "adult_preset",
    "audit_dataset",
    "balanced_level_size",
    "balanced_subsample",
    "biased_benchmark_config",
    "brute_force_counts",
    "disparate_impact",
    "empirical_variance",
    "enumerate_level",
    "generate",
    "identity_config",
    "interpret_var_ratio",
    "isp_benchmark_config",
    "isp_variance",
    "level_extrema",
    "level_size",
    "level_variance",
    "levels_csv",
    "load_config",
    "load_csv",
    "narrowing_violations",
    "propagate",
    "sandwich_violations",
    "shape",
    "statistical_parity",
    "subgroups_csv",
    "tally_confusion",
    "tally_vertices",
    "var_ratio",
    "variance_lower_bound",
    "vertex_success_probabilities",
    "write_binary_csv",
]
