"""Semantic triage for generated program patches.

Classifies patches into a fixed 18-category edit taxonomy from short
natural-language summaries of their diffs, and uses per-category quality
statistics to decide which patches are worth running the test suite on.
"""

from .augment import (
    TemplateSet,
    augment_dataset,
    check_keyword_consistency,
    default_templates,
    generate_summaries,
    load_templates,
)
from .clustering import (
    ClusterModel,
    kmeans_fit,
    kmeans_plus_plus_init,
    load_model,
    predict_category,
    save_model,
    seeded_fit,
)
from .dataset import (
    LabeledSummary,
    PatchRecord,
    dedup_summaries,
    labeled_summaries_from_records,
    load_records,
    save_records,
    split_train_test,
    update_record,
)
from .diffs import (
    Hunk,
    PatchDiff,
    SourcePair,
    apply_diff,
    compute_diff,
    is_textual_noop,
    parse_diff,
    render_hunks,
)
from .embeddings import (
    DEFAULT_DIM,
    EmbeddingVector,
    embed_hashed,
    embed_hashed_batch,
    embed_remote,
    tokenize,
)
from .errors import (
    Busy,
    DegenerateSeeding,
    DiffApplyError,
    DiffParseError,
    DimensionMismatch,
    EmptyCompletion,
    EmptyDiff,
    EmptySummary,
    EmptyText,
    InvalidCategory,
    InvalidRatio,
    LengthMismatch,
    NotFound,
    NotReady,
    PatchTriageError,
    SchemaError,
    TooFewPoints,
)
from .metrics import clustering_accuracy, contingency_table, nmi
from .pipeline import (
    build_metrics_report,
    evaluate_records,
    predict_summary,
    train_from_summaries,
)
from .summaries import (
    CleanupRules,
    SummarizerConfig,
    build_prompt,
    clean_summary,
    summarize,
    summarize_batch,
    word_count,
)
from .taxonomy import (
    ALL_CATEGORY_IDS,
    DESCRIPTIONS,
    NOOP_CATEGORIES,
    NUM_CATEGORIES,
    check_category,
    describe,
    export_taxonomy,
    is_noop_category,
)
from .triage import (
    CategoryCounts,
    CategoryStats,
    ReplayReport,
    TriageDecision,
    TriagePolicy,
    accumulate_stats,
    decide,
    mismatch_matrix,
    mismatches_to_csv,
    render_mismatches,
    replay,
)

__version__ = "0.1.0"
