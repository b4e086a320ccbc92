"""newsdiscord: find the questions news sources answer differently.

For a multi-source story the pipeline generates candidate questions from a
summary, extracts each source's answer verbatim from its articles, groups
the answers by pairwise similarity on a thresholded graph, and triages each
question as peripheral, consensus, vague, or discord. Discord questions,
with their answer groups, are persisted and served to reader interfaces.
"""

from .categorize import (
    Category,
    CategoryConfig,
    CategoryLabel,
    QuestionStats,
    categorize_question,
    coverage_ratio,
    specificity,
)
from .config import RunConfig, load_run_config, make_providers
from .consolidation import (
    AnswerGroup,
    Grouping,
    GroupingMethod,
    LabeledPair,
    SimilarityMatrix,
    Threshold,
    aggregate_annotations,
    build_similarity_matrix,
    consolidate,
    louvain_cluster,
    select_representative,
    select_threshold,
)
from .corpus import (
    Article,
    DistractorSet,
    Source,
    Story,
    load_story_bundle,
    save_story_bundle,
    select_distractors,
    select_summary,
)
from .evalharness import (
    adjusted_rand_index,
    agreement_leave_one_out,
    balanced_accuracy,
    discord_rate_report,
    pairs_from_grouping,
    pearson,
)
from .feeds import DirectoryFeedClient, fetch_story
from .louvain import louvain_communities, modularity
from .pipeline import (
    QuestionAnalysis,
    StoryAnalysis,
    analyze_story,
    dedup_questions,
    reduce_per_source,
)
from .providers import (
    Answer,
    CandidateQuestion,
    FixtureQuestionProvider,
    LexicalAnswerExtractor,
    NoAnswer,
    Origin,
    PairScore,
    ProviderSet,
    Scale,
    StartWord,
    TemplateQuestionProvider,
    TokenF1Scorer,
    nli_score,
)
from .storage import AnalysisStore, config_fingerprint

__version__ = "0.1.0"

__all__ = [
    "AnalysisStore",
    "Answer",
    "AnswerGroup",
    "Article",
    "CandidateQuestion",
    "Category",
    "CategoryConfig",
    "CategoryLabel",
    "DirectoryFeedClient",
    "DistractorSet",
    "FixtureQuestionProvider",
    "Grouping",
    "GroupingMethod",
    "LabeledPair",
    "LexicalAnswerExtractor",
    "NoAnswer",
    "Origin",
    "PairScore",
    "ProviderSet",
    "QuestionAnalysis",
    "QuestionStats",
    "RunConfig",
    "Scale",
    "SimilarityMatrix",
    "Source",
    "StartWord",
    "Story",
    "StoryAnalysis",
    "TemplateQuestionProvider",
    "Threshold",
    "TokenF1Scorer",
    "adjusted_rand_index",
    "aggregate_annotations",
    "agreement_leave_one_out",
    "analyze_story",
    "balanced_accuracy",
    "build_similarity_matrix",
    "categorize_question",
    "config_fingerprint",
    "consolidate",
    "coverage_ratio",
    "dedup_questions",
    "discord_rate_report",
    "fetch_story",
    "load_run_config",
    "load_story_bundle",
    "louvain_cluster",
    "louvain_communities",
    "make_providers",
    "modularity",
    "nli_score",
    "pairs_from_grouping",
    "pearson",
    "reduce_per_source",
    "save_story_bundle",
    "select_distractors",
    "select_representative",
    "select_summary",
    "select_threshold",
    "specificity",
]
