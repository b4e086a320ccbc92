"""HTTP clients for remote inference backends.

Wire protocol (JSON request and response bodies):
  POST {qg_url}/generate  {summary, start_word, n} -> {questions: [str, ...]}
  POST {qa_url}/extract   {question, context}      -> {span, start, end, confidence}
                                                     | {no_answer: true, confidence}
  POST {scorer_url}/score {question, answer_a, answer_b} -> {score, scale}

Each request is retried twice with backoff before the item is reported
unavailable; a failed item never aborts a story.
"""

from __future__ import annotations

import logging
import time

import requests

from ..corpus import Article
from ..errors import MalformedOutput, ProviderUnavailable
from ..text import normalized_key
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

DEFAULT_TIMEOUT = 30.0
DEFAULT_RETRIES = 2
DEFAULT_BACKOFF = 0.5


class _RemoteBase:
    def __init__(
        self,
        base_url: str,
        timeout: float = DEFAULT_TIMEOUT,
        retries: int = DEFAULT_RETRIES,
        backoff: float = DEFAULT_BACKOFF,
        session: requests.Session | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._session = session or requests.Session()

    def _post(self, path: str, payload: dict) -> dict:
        url = f"{self.base_url}{path}"
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                response = self._session.post(url, json=payload, timeout=self.timeout)
                response.raise_for_status()
                body = response.json()
                if not isinstance(body, dict):
                    raise MalformedOutput(f"{url} returned a non-object body")
                return body
            except MalformedOutput:
                raise
            except (requests.RequestException, ValueError) as exc:
                last_error = exc
                if attempt < self.retries:
                    time.sleep(self.backoff * (attempt + 1))
        raise ProviderUnavailable(f"{url} failed after {self.retries + 1} attempts: {last_error}")


class RemoteQuestionGenerator(_RemoteBase):
    @property
    def identifier(self) -> str:
        return f"remote-qg:{self.base_url}"

    def generate_questions(
        self, summary: str, start_word: StartWord, n: int, *, story_id: str = ""
    ) -> list[CandidateQuestion]:
        body = self._post(
            "/generate", {"summary": summary, "start_word": start_word.value, "n": n}
        )
        raw = body.get("questions")
        if not isinstance(raw, list):
            raise MalformedOutput(f"{self.base_url}/generate returned no questions list")
        out: list[CandidateQuestion] = []
        seen: set[str] = set()
        for text in raw:
            try:
                candidate = make_candidate(str(text), start_word, story_id, Origin.GENERATED)
            except MalformedOutput:
                logger.warning("dropping malformed generated question %r", text)
                continue
            key = normalized_key(candidate.text)
            if key in seen:
                continue
            seen.add(key)
            out.append(candidate)
            if len(out) >= n:
                break
        return out


class RemoteAnswerExtractor(_RemoteBase):
    @property
    def identifier(self) -> str:
        return f"remote-qa:{self.base_url}"

    def extract_answer(self, question: CandidateQuestion, article: Article) -> Extraction:
        body = self._post(
            "/extract", {"question": question.text, "context": article.content}
        )
        confidence = float(body.get("confidence", 0.0))
        confidence = min(1.0, max(0.0, confidence))
        if body.get("no_answer"):
            return NoAnswer(
                question_id=question.id,
                source_id=article.source_id,
                article_id=article.id,
                confidence=confidence,
            )
        span = body.get("span")
        start = body.get("start")
        end = body.get("end")
        if not isinstance(span, str) or not isinstance(start, int) or not isinstance(end, int):
            raise MalformedOutput(f"{self.base_url}/extract returned an invalid span payload")
        if article.content[start:end] != span or not span:
            # The extractive contract only admits verbatim spans.
            logger.warning(
                "offset mismatch from %s for article %s; treating as no answer",
                self.base_url,
                article.id,
            )
            return NoAnswer(
                question_id=question.id,
                source_id=article.source_id,
                article_id=article.id,
                confidence=0.0,
            )
        return answer_from_span(question, article, start, end, confidence)


class RemotePairScorer(_RemoteBase):
    @property
    def identifier(self) -> str:
        return f"remote-scorer:{self.base_url}"

    def score_pair(self, question: str, answer_a: str, answer_b: str) -> PairScore:
        body = self._post(
            "/score", {"question": question, "answer_a": answer_a, "answer_b": answer_b}
        )
        try:
            scale = Scale(str(body.get("scale", Scale.UNIT.value)))
            score = float(body["score"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedOutput(f"{self.base_url}/score returned an invalid body") from exc
        return PairScore(score=score, scale=scale)
