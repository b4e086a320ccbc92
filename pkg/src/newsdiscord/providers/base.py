"""Contracts for the three model roles: question generation, extractive
answering, and answer-pair scoring.

Implementations must be safe for concurrent calls and deterministic for
identical inputs; results never depend on call interleaving.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, Union

from ..corpus import Article
from ..errors import InputError, MalformedOutput


class StartWord(str, Enum):
    WHY = "Why"
    HOW = "How"
    WHAT = "What"
    WHO = "Who"


START_WORDS = (StartWord.WHY, StartWord.HOW, StartWord.WHAT, StartWord.WHO)


class Origin(str, Enum):
    GENERATED = "generated"
    FIXTURE = "fixture"
    HUMAN = "human"


class Scale(str, Enum):
    """Score scale declared by a pair scorer."""

    UNIT = "unit"      # [0, 1]
    MOCHA = "mocha"    # [1, 5]
    SIGNED = "signed"  # [-1, 1]


SCALE_BOUNDS: dict[Scale, tuple[float, float]] = {
    Scale.UNIT: (0.0, 1.0),
    Scale.MOCHA: (1.0, 5.0),
    Scale.SIGNED: (-1.0, 1.0),
}


@dataclass(frozen=True)
class CandidateQuestion:
    """A generated question; text starts with its start word and ends with '?'."""

    id: str
    text: str
    start_word: StartWord
    story_id: str
    origin: Origin

    def __post_init__(self) -> None:
        if not self.text.lower().startswith(self.start_word.value.lower()):
            raise MalformedOutput(
                f"question {self.text!r} does not start with {self.start_word.value!r}"
            )
        if not self.text.endswith("?"):
            raise MalformedOutput(f"question {self.text!r} does not end with '?'")


def question_id_for(story_id: str, start_word: StartWord, text: str) -> str:
    """Deterministic id derived from content, stable across runs and machines."""
    from ..text import normalized_key

    digest = hashlib.sha1(
        f"{story_id}|{start_word.value}|{normalized_key(text)}".encode("utf-8")
    ).hexdigest()
    return f"q-{digest[:10]}"


def make_candidate(
    text: str,
    start_word: StartWord,
    story_id: str,
    origin: Origin,
) -> CandidateQuestion:
    from ..text import normalize_text

    clean = normalize_text(text)
    return CandidateQuestion(
        id=question_id_for(story_id, start_word, clean),
        text=clean,
        start_word=start_word,
        story_id=story_id,
        origin=origin,
    )


@dataclass(frozen=True)
class Answer:
    """A verbatim span extracted from one article's content."""

    question_id: str
    source_id: str
    article_id: str
    text: str
    char_start: int
    char_end: int
    confidence: float

    def __post_init__(self) -> None:
        if not self.text:
            raise InputError("answer span is empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise InputError(f"confidence {self.confidence} outside [0, 1]")
        if self.char_end - self.char_start != len(self.text) or self.char_start < 0:
            raise InputError("answer offsets do not match span length")

    @property
    def id(self) -> str:
        return f"{self.question_id}@{self.article_id}"


@dataclass(frozen=True)
class NoAnswer:
    """The model's explicit judgement that an article does not answer."""

    question_id: str
    source_id: str
    article_id: str
    confidence: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise InputError(f"confidence {self.confidence} outside [0, 1]")


Extraction = Union[Answer, NoAnswer]


def answer_from_span(
    question: CandidateQuestion,
    article: Article,
    char_start: int,
    char_end: int,
    confidence: float,
) -> Answer:
    """Build an Answer, enforcing the extractive contract against the article."""
    span = article.content[char_start:char_end]
    if not span or char_start < 0 or char_end > len(article.content):
        raise InputError(f"span [{char_start}:{char_end}] not inside article {article.id!r}")
    return Answer(
        question_id=question.id,
        source_id=article.source_id,
        article_id=article.id,
        text=span,
        char_start=char_start,
        char_end=char_end,
        confidence=confidence,
    )


def is_extractive(answer: Answer, article: Article) -> bool:
    return article.content[answer.char_start : answer.char_end] == answer.text


@dataclass(frozen=True)
class PairScore:
    """A similarity judgement for one answer pair.

    Identity fields may be empty at the provider boundary; callers that
    track answer ids fill them in when persisting scores.
    """

    score: float
    scale: Scale
    question_id: str = ""
    answer_a: str = ""
    answer_b: str = ""

    def __post_init__(self) -> None:
        low, high = SCALE_BOUNDS[self.scale]
        if not low <= self.score <= high:
            raise InputError(f"score {self.score} outside {self.scale.value} bounds [{low}, {high}]")

    def unit(self) -> float:
        return to_unit(self.score, self.scale)


def to_unit(score: float, scale: Scale) -> float:
    """Affine map onto [0, 1] so one threshold semantics covers all scales."""
    low, high = SCALE_BOUNDS[scale]
    if not low <= score <= high:
        raise InputError(f"score {score} outside {scale.value} bounds [{low}, {high}]")
    return (score - low) / (high - low)


def nli_score(p_entail: float, p_contradict: float) -> float:
    """Signed similarity from entailment and contradiction probabilities."""
    for name, p in (("p_entail", p_entail), ("p_contradict", p_contradict)):
        if not 0.0 <= p <= 1.0:
            raise InputError(f"{name}={p} outside [0, 1]")
    return p_entail - p_contradict


class QuestionGenerator(Protocol):
    identifier: str

    def generate_questions(
        self, summary: str, start_word: StartWord, n: int, *, story_id: str = ""
    ) -> list[CandidateQuestion]: ...


class AnswerExtractor(Protocol):
    identifier: str

    def extract_answer(self, question: CandidateQuestion, article: Article) -> Extraction: ...


class PairScorer(Protocol):
    identifier: str

    def score_pair(self, question: str, answer_a: str, answer_b: str) -> PairScore: ...


@dataclass(frozen=True)
class ProviderSet:
    """The three backends a pipeline run is wired to."""

    qg: QuestionGenerator
    qa: AnswerExtractor
    scorer: PairScorer

    @property
    def identifiers(self) -> tuple[str, str, str]:
        return (self.qg.identifier, self.qa.identifier, self.scorer.identifier)
