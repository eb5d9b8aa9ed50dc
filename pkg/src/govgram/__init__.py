"""govgram: institutional-statement mining for governance documents.

Converts version-controlled governance text into Role/Action/Deontic
statements over fixed taxonomies and quantifies longitudinal change
with entropy, thresholded category counts, rarefaction, Jensen-Shannon
divergence, and repository-bootstrap confidence intervals.
"""

from .corpus_ingest import (
    GovernanceFileRef,
    IngestError,
    SnapshotPair,
    compose_view,
    discover_governance_files,
    ingest_repository,
    pair_snapshots,
    recover_history,
)
from .ig_parser import (
    DeonticType,
    InstitutionalStatement,
    canonicalize_deontic,
    lemmatize_verb,
    parse_sentence,
    parse_statement,
)
from .inference import (
    BootstrapResult,
    InferenceError,
    ShareDelta,
    bootstrap_mean,
    delta_share,
    delta_share_table,
    summarize_feature,
)
from .metrics import (
    CategoryDistribution,
    RepoMetrics,
    UndefinedMetricError,
    compute_repo_metrics,
    count_k,
    entropy,
    jsd,
    rarefied_delta_k,
)
from .normalize import NormalizedDoc, Sentence, normalize_markup, resolve_pronouns, segment
from .report import RunConfig, emit_figure_data, run_pipeline
from .taxonomy import (
    ACTION_CATEGORIES,
    ROLE_CATEGORIES,
    LabeledStatement,
    Lexicon,
    categorize_action,
    cohens_kappa,
    deontic_binary,
    label_statement,
    load_action_lexicon,
    load_role_lexicon,
    normalize_role,
    percent_agreement,
)

__version__ = "0.1.0"

__all__ = [
    "ACTION_CATEGORIES",
    "BootstrapResult",
    "CategoryDistribution",
    "DeonticType",
    "GovernanceFileRef",
    "InferenceError",
    "IngestError",
    "InstitutionalStatement",
    "LabeledStatement",
    "Lexicon",
    "NormalizedDoc",
    "ROLE_CATEGORIES",
    "RepoMetrics",
    "RunConfig",
    "Sentence",
    "ShareDelta",
    "SnapshotPair",
    "UndefinedMetricError",
    "bootstrap_mean",
    "canonicalize_deontic",
    "categorize_action",
    "cohens_kappa",
    "compose_view",
    "compute_repo_metrics",
    "count_k",
    "delta_share",
    "delta_share_table",
    "deontic_binary",
    "discover_governance_files",
    "emit_figure_data",
    "entropy",
    "ingest_repository",
    "jsd",
    "label_statement",
    "lemmatize_verb",
    "load_action_lexicon",
    "load_role_lexicon",
    "normalize_markup",
    "normalize_role",
    "pair_snapshots",
    "parse_sentence",
    "parse_statement",
    "percent_agreement",
    "rarefied_delta_k",
    "recover_history",
    "resolve_pronouns",
    "run_pipeline",
    "segment",
    "summarize_feature",
    "__version__",
]
