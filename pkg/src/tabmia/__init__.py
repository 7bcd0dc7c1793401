"""tabmia: worst-case membership-inference privacy audits for tabular synthetic data.

Given a (train, holdout, synthetic, reference) dataset quadruple, tabmia runs
an ensemble of no-box and reference-calibrated membership-inference attacks
and reports per-attack metrics plus their max-over-attacks aggregates — the
worst-case leakage estimate across the implemented attack suite.
"""

from .attacks import (
    CALIBRATED_FAMILIES,
    DEFAULT_K_GRID,
    DEFAULT_RADIUS,
    FAMILIES,
    AttackSpec,
    run_attack,
)
from .audit import (
    AuditConfig,
    AuditReport,
    InstanceResult,
    compare_reports,
    default_grid,
    expand_grid,
    family_grid,
    render_comparison,
    render_markdown,
    run_suite,
)
from .core import (
    AttackResult,
    Column,
    DataTable,
    EvalSet,
    Quadruple,
    RandomSeed,
    SchemaMismatchError,
    TableSchema,
    build_eval_set,
    validate_quadruple,
)
from .dcrprop import DcrPropResult, dcr_prop
from .estimators import (
    ForestConfig,
    ForestDiscriminator,
    KdeModel,
    MlpConfig,
    MlpDiscriminator,
    NeighborIndex,
    discriminator_score,
    fit_kde,
    kde_logpdf,
    scott_bandwidth,
    train_discriminator,
)
from .evaluation import (
    FPR_TARGETS,
    MetricReport,
    RocCurve,
    accuracy_best,
    advantage_and_privacy_gain,
    auc,
    brier,
    effective_epsilon,
    metric_report,
    roc,
    tpr_at_fpr,
)
from .harness import FIXTURES, ToyGenerator, generate, make_case
from .ingest import (
    IngestError,
    SplitSpec,
    fingerprint,
    read_schema,
    read_table,
    split_real,
    write_schema,
    write_table,
)
from .preprocess import EncodedMatrix, FittedTransformer, fit_transformer, transform

__version__ = "0.1.0"

__all__ = [
    "AttackResult",
    "AttackSpec",
    "AuditConfig",
    "AuditReport",
    "CALIBRATED_FAMILIES",
    "Column",
    "DEFAULT_K_GRID",
    "DEFAULT_RADIUS",
    "DataTable",
    "DcrPropResult",
    "EncodedMatrix",
    "EvalSet",
    "FAMILIES",
    "FIXTURES",
    "FPR_TARGETS",
    "FittedTransformer",
    "ForestConfig",
    "ForestDiscriminator",
    "IngestError",
    "InstanceResult",
    "KdeModel",
    "MetricReport",
    "MlpConfig",
    "MlpDiscriminator",
    "NeighborIndex",
    "Quadruple",
    "RandomSeed",
    "RocCurve",
    "SchemaMismatchError",
    "SplitSpec",
    "TableSchema",
    "ToyGenerator",
    "accuracy_best",
    "advantage_and_privacy_gain",
    "auc",
    "brier",
    "build_eval_set",
    "compare_reports",
    "dcr_prop",
    "default_grid",
    "discriminator_score",
    "effective_epsilon",
    "expand_grid",
    "family_grid",
    "fingerprint",
    "fit_kde",
    "fit_transformer",
    "generate",
    "kde_logpdf",
    "make_case",
    "metric_report",
    "read_schema",
    "read_table",
    "render_comparison",
    "render_markdown",
    "roc",
    "run_attack",
    "run_suite",
    "scott_bandwidth",
    "split_real",
    "tpr_at_fpr",
    "train_discriminator",
    "transform",
    "validate_quadruple",
    "write_schema",
    "write_table",
]
