"""Oblique decision trees by exhaustive search over hyperplanes through
sample subsets, with axis-aligned and reflection-based baselines,
repeated cross-validation tooling, comparison statistics, and an
operation-count model for the search."""

__version__ = "0.1.0"

from .complexity import DEFAULT_N_VALUES, DEFAULT_R_VALUES, format_count, op_count, table1
from .criteria import (
    Criterion,
    PartitionCounts,
    SCORERS,
    gini,
    gini_from_counts,
    info_gain,
    info_gain_from_counts,
    is_better,
    twoing,
    twoing_from_counts,
    worst_score,
)
from .data import (
    ClassCounts,
    DEFAULT_MISSING_TOKENS,
    Dataset,
    discretize_label,
    load_csv,
    mean_impute,
    remove_rows_missing,
)
from .errors import (
    ConfigurationError,
    ContractViolationError,
    DomainError,
    EmptyDatasetError,
    FormatError,
    ObliqueError,
    PreprocessingError,
    UndefinedEffectError,
)
from .evaluation import (
    CVConfig,
    CVReport,
    GridCell,
    cohens_d,
    cross_validate,
    grid_search,
    partition_folds,
    regularized_incomplete_beta,
    select_best,
    welch_t_test,
)
from .geometry import (
    Hyperplane,
    Side,
    canonical_plane,
    fit_hyperplane,
    householder_reflection,
    side_of,
    symmetric_eigen,
)
from .induction import (
    Algorithm,
    InductionConfig,
    Leaf,
    Split,
    SplitCandidate,
    Tree,
    best_split_axis,
    best_split_elc,
    best_split_hhcart,
    deserialize,
    evaluate_split,
    fit,
    predict,
    serialize,
    tree_depth,
    tree_size,
    truncate_tree,
)

__all__ = [
    "__version__",
    "Algorithm",
    "ClassCounts",
    "ConfigurationError",
    "ContractViolationError",
    "Criterion",
    "CVConfig",
    "CVReport",
    "Dataset",
    "DEFAULT_MISSING_TOKENS",
    "DEFAULT_N_VALUES",
    "DEFAULT_R_VALUES",
    "DomainError",
    "EmptyDatasetError",
    "FormatError",
    "GridCell",
    "Hyperplane",
    "InductionConfig",
    "Leaf",
    "ObliqueError",
    "PartitionCounts",
    "PreprocessingError",
    "SCORERS",
    "Side",
    "Split",
    "SplitCandidate",
    "Tree",
    "UndefinedEffectError",
    "best_split_axis",
    "best_split_elc",
    "best_split_hhcart",
    "canonical_plane",
    "cohens_d",
    "cross_validate",
    "deserialize",
    "discretize_label",
    "evaluate_split",
    "fit",
    "fit_hyperplane",
    "format_count",
    "gini",
    "gini_from_counts",
    "grid_search",
    "householder_reflection",
    "info_gain",
    "info_gain_from_counts",
    "is_better",
    "load_csv",
    "mean_impute",
    "op_count",
    "partition_folds",
    "predict",
    "regularized_incomplete_beta",
    "remove_rows_missing",
    "select_best",
    "serialize",
    "side_of",
    "symmetric_eigen",
    "table1",
    "tree_depth",
    "tree_size",
    "truncate_tree",
    "twoing",
    "twoing_from_counts",
    "welch_t_test",
    "worst_score",
]
