"""Deterministic local providers for offline runs and tests.

These are pure functions of their inputs: reruns are byte-identical, no
model weights or network involved.
"""

from __future__ import annotations

import logging

from ..corpus import Article, Story
from ..errors import MalformedOutput
from ..text import content_tokens, normalized_key, sentence_spans, token_f1
from .base import (
    CandidateQuestion,
    Extraction,
    NoAnswer,
    Origin,
    PairScore,
    Scale,
    StartWord,
    answer_from_span,
    make_candidate,
)

logger = logging.getLogger(__name__)

MIN_OVERLAP_TOKENS = 2


class FixtureQuestionProvider:
    """Returns the questions stored in a story bundle, filtered by start word."""

    identifier = "fixture-qg"

    def __init__(self, story: Story):
        self._story = story

    def generate_questions(
        self, summary: str, start_word: StartWord, n: int, *, story_id: str = ""
    ) -> list[CandidateQuestion]:
        sid = story_id or self._story.id
        out: list[CandidateQuestion] = []
        seen: set[str] = set()
        for seed in self._story.seed_questions:
            if seed.start_word != start_word.value:
                continue
            try:
                candidate = make_candidate(seed.text, start_word, sid, Origin.FIXTURE)
            except MalformedOutput:
                logger.warning("dropping malformed seed question %r", seed.text)
                continue
            key = normalized_key(candidate.text)
            if key in seen:
                continue
            seen.add(key)
            out.append(candidate)
            if len(out) >= n:
                break
        return out


_TEMPLATES = {
    StartWord.WHY: "Why does {topic} matter in this story?",
    StartWord.HOW: "How is {topic} being handled?",
    StartWord.WHAT: "What is reported about {topic}?",
    StartWord.WHO: "Who is involved with {topic}?",
}


def _sentence_topic(sentence: str) -> str | None:
    """Longest content token of a sentence; ties go to the earliest one."""
    best = None
    for token in content_tokens(sentence):
        if best is None or len(token) > len(best):
            best = token
    return best


class TemplateQuestionProvider:
    """Trivial generator: one templated question per summary sentence."""

    identifier = "template-qg"

    def generate_questions(
        self, summary: str, start_word: StartWord, n: int, *, story_id: str = ""
    ) -> list[CandidateQuestion]:
        out: list[CandidateQuestion] = []
        seen: set[str] = set()
        for sentence in (summary[s:e] for s, e in sentence_spans(summary)):
            topic = _sentence_topic(sentence)
            if topic is None:
                continue
            text = _TEMPLATES[start_word].format(topic=topic)
            key = normalized_key(text)
            if key in seen:
                continue
            seen.add(key)
            out.append(make_candidate(text, start_word, story_id, Origin.GENERATED))
            if len(out) >= n:
                break
        return out


class LexicalAnswerExtractor:
    """Selects the sentence with the highest stopword-filtered token overlap
    with the question; below two overlapping tokens it reports no answer."""

    identifier = "lexical-qa"

    def extract_answer(self, question: CandidateQuestion, article: Article) -> Extraction:
        question_tokens = set(content_tokens(question.text))
        best_span: tuple[int, int] | None = None
        best_overlap = 0
        for start, end in sentence_spans(article.content):
            overlap = len(question_tokens & set(content_tokens(article.content[start:end])))
            if overlap > best_overlap:
                best_overlap = overlap
                best_span = (start, end)
        if best_span is None or best_overlap < MIN_OVERLAP_TOKENS:
            no_answer_confidence = 1.0 - 0.5 * min(best_overlap, 1)
            return NoAnswer(
                question_id=question.id,
                source_id=article.source_id,
                article_id=article.id,
                confidence=no_answer_confidence,
            )
        confidence = min(1.0, best_overlap / max(1, len(question_tokens)))
        return answer_from_span(question, article, best_span[0], best_span[1], confidence)


class TokenF1Scorer:
    """Unit-scale multiset token F1 over lowercased, punctuation-stripped tokens."""

    identifier = "token-f1"

    def score_pair(self, question: str, answer_a: str, answer_b: str) -> PairScore:
        return PairScore(score=token_f1(answer_a, answer_b), scale=Scale.UNIT)
