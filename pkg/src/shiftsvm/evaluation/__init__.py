"""Cross-validation harness, imbalance-aware measures and significance tests."""

from .experiment import (
    PURPOSES,
    Comparison,
    ExperimentResult,
    FoldResult,
    Method,
    aggregate,
    compare_results,
    derive_seed,
    fold_records,
    parse_method,
    read_fold_log,
    run_experiment,
    stratified_kfold,
    write_fold_log,
)
from .metrics import ConfusionTable, Measures, confusion_table, metrics, round_half_away
from .report import (
    CONFUSION_METHODS,
    REGRESSION_METHODS,
    SMOTE_METHODS,
    aggregate_rows,
    confusion_report,
    method_lines,
    regression_table,
    smote_table,
    write_csv,
)
from .wilcoxon import EXACT_MAX_N, WilcoxonResult, wilcoxon_signed_rank
