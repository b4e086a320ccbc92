from .base import (
    Answer,
    AnswerExtractor,
    CandidateQuestion,
    Extraction,
    NoAnswer,
    Origin,
    PairScore,
    PairScorer,
    ProviderSet,
    QuestionGenerator,
    Scale,
    SCALE_BOUNDS,
    START_WORDS,
    StartWord,
    answer_from_span,
    is_extractive,
    make_candidate,
    nli_score,
    question_id_for,
    to_unit,
)
from .reference import (
    FixtureQuestionProvider,
    LexicalAnswerExtractor,
    TemplateQuestionProvider,
    TokenF1Scorer,
)
from .remote import RemoteAnswerExtractor, RemotePairScorer, RemoteQuestionGenerator

__all__ = [
    "Answer",
    "AnswerExtractor",
    "CandidateQuestion",
    "Extraction",
    "FixtureQuestionProvider",
    "LexicalAnswerExtractor",
    "NoAnswer",
    "Origin",
    "PairScore",
    "PairScorer",
    "ProviderSet",
    "QuestionGenerator",
    "RemoteAnswerExtractor",
    "RemotePairScorer",
    "RemoteQuestionGenerator",
    "Scale",
    "SCALE_BOUNDS",
    "START_WORDS",
    "StartWord",
    "TemplateQuestionProvider",
    "TokenF1Scorer",
    "answer_from_span",
    "is_extractive",
    "make_candidate",
    "nli_score",
    "question_id_for",
    "to_unit",
]
