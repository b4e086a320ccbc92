"""Multi-source story bundles: domain types, loading, validation, selection.

A story is a set of articles published around the same time, each attributed
to exactly one source. Bundles are JSON files, one per story; loading
normalizes text, validates references, and canonicalizes article order so
that any permutation of the same bundle yields an identical Story.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .errors import ParseError, ValidationError
from .text import normalize_text, sentence_spans

logger = logging.getLogger(__name__)

_KNOWN_STORY_FIELDS = {"id", "title", "sources", "articles", "distractors", "questions"}
_KNOWN_SOURCE_FIELDS = {"id", "display_name"}
_KNOWN_ARTICLE_FIELDS = {"id", "source_id", "headline", "content", "summary", "published_at", "url"}
_KNOWN_QUESTION_FIELDS = {"text", "start_word"}

SUMMARY_LEAD_SENTENCES = 3
DEFAULT_DISTRACTOR_COUNT = 10
DEFAULT_CUTOFF_DAYS = 90


@dataclass(frozen=True)
class Source:
    """A media organization, identified by a stable slug such as a domain."""

    id: str
    display_name: str


@dataclass(frozen=True)
class Article:
    id: str
    source_id: str
    headline: str
    content: str
    published_at: datetime
    summary: str | None = None
    url: str | None = None


@dataclass(frozen=True)
class SeedQuestion:
    """A question stored in a bundle, consumed by the fixture generator."""

    text: str
    start_word: str


@dataclass(frozen=True)
class Story:
    id: str
    title: str
    articles: tuple[Article, ...]
    sources: tuple[Source, ...]
    distractor_articles: tuple[Article, ...] = ()
    seed_questions: tuple[SeedQuestion, ...] = ()
    flags: tuple[str, ...] = ()

    @property
    def distractor_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.distractor_articles)

    @property
    def full_context(self) -> str:
        """The concatenated contents of all story articles."""
        return "\n\n".join(a.content for a in self.articles)

    def source_by_id(self, source_id: str) -> Source:
        for source in self.sources:
            if source.id == source_id:
                return source
        raise KeyError(source_id)

    def article_by_id(self, article_id: str) -> Article:
        for article in self.articles:
            if article.id == article_id:
                return article
        raise KeyError(article_id)


@dataclass(frozen=True)
class DistractorSet:
    """Older, unrelated articles used to probe how story-specific a question is."""

    articles: tuple[Article, ...]
    cutoff_days: int
    insufficient: bool = False


def parse_timestamp(value: str) -> datetime:
    if not isinstance(value, str):
        raise ValidationError(f"timestamp must be an ISO-8601 string, got {value!r}")
    raw = value.replace("Z", "+00:00")
    try:
        parsed = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise ValidationError(f"bad timestamp {value!r}") from exc
    if parsed.tzinfo is None:
        logger.warning("naive timestamp %r treated as UTC", value)
        return parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def format_timestamp(value: datetime) -> str:
    return value.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _warn_unknown(kind: str, payload: dict, known: set[str]) -> None:
    for key in sorted(set(payload) - known):
        logger.warning("ignoring unknown %s field %r", kind, key)


def _parse_article(payload: dict, *, require_source: set[str] | None) -> Article:
    if not isinstance(payload, dict):
        raise ValidationError(f"article entry must be an object, got {type(payload).__name__}")
    _warn_unknown("article", payload, _KNOWN_ARTICLE_FIELDS)
    article_id = payload.get("id")
    if not article_id or not isinstance(article_id, str):
        raise ValidationError("article is missing a non-empty id")
    source_id = payload.get("source_id")
    if not source_id or not isinstance(source_id, str):
        raise ValidationError(f"article {article_id!r} is missing source_id")
    if require_source is not None and source_id not in require_source:
        raise ValidationError(f"article {article_id!r} references unknown source {source_id!r}")
    content = normalize_text(str(payload.get("content") or ""))
    if not content:
        raise ValidationError(f"article {article_id!r} has empty content")
    summary_raw = payload.get("summary")
    summary = normalize_text(str(summary_raw)) if summary_raw else None
    url = payload.get("url")
    return Article(
        id=article_id,
        source_id=source_id,
        headline=normalize_text(str(payload.get("headline") or "")),
        content=content,
        published_at=parse_timestamp(payload.get("published_at")),
        summary=summary or None,
        url=str(url) if url else None,
    )


def _canonical_articles(articles: list[Article]) -> tuple[Article, ...]:
    return tuple(sorted(articles, key=lambda a: (a.published_at, a.id)))


def story_from_dict(payload: dict) -> Story:
    """Validate a decoded bundle object and build a canonical Story."""
    if not isinstance(payload, dict):
        raise ValidationError("bundle must decode to an object")
    _warn_unknown("bundle", payload, _KNOWN_STORY_FIELDS)

    story_id = payload.get("id")
    if not story_id or not isinstance(story_id, str):
        raise ValidationError("bundle is missing a non-empty id")
    title = normalize_text(str(payload.get("title") or ""))
    if not title:
        raise ValidationError(f"bundle {story_id!r} is missing a title")

    sources: dict[str, Source] = {}
    for entry in payload.get("sources") or []:
        if not isinstance(entry, dict):
            raise ValidationError("source entry must be an object")
        _warn_unknown("source", entry, _KNOWN_SOURCE_FIELDS)
        sid = entry.get("id")
        if not sid or not isinstance(sid, str):
            raise ValidationError("source is missing a non-empty id")
        if sid in sources:
            raise ValidationError(f"duplicate source id {sid!r}")
        sources[sid] = Source(id=sid, display_name=str(entry.get("display_name") or sid))

    raw_articles = payload.get("articles") or []
    if not raw_articles:
        raise ValidationError(f"bundle {story_id!r} has no articles")
    articles = [_parse_article(a, require_source=set(sources)) for a in raw_articles]
    seen_ids: set[str] = set()
    for article in articles:
        if article.id in seen_ids:
            raise ValidationError(f"duplicate article id {article.id!r}")
        seen_ids.add(article.id)

    # Distractors are archive material; their sources are recorded verbatim
    # and do not have to be declared in the bundle's source list.
    distractors = [
        _parse_article(a, require_source=None) for a in payload.get("distractors") or []
    ]
    for article in distractors:
        if article.id in seen_ids:
            raise ValidationError(f"duplicate article id {article.id!r}")
        seen_ids.add(article.id)

    referenced = {a.source_id for a in articles}
    for sid in sorted(set(sources) - referenced):
        logger.warning("source %r declared but not referenced by any article", sid)

    seeds = []
    for entry in payload.get("questions") or []:
        if not isinstance(entry, dict) or not entry.get("text") or not entry.get("start_word"):
            raise ValidationError("seed question entries need text and start_word")
        _warn_unknown("question", entry, _KNOWN_QUESTION_FIELDS)
        seeds.append(
            SeedQuestion(text=normalize_text(str(entry["text"])), start_word=str(entry["start_word"]))
        )

    return Story(
        id=story_id,
        title=title,
        articles=_canonical_articles(articles),
        sources=tuple(sources[sid] for sid in sorted(referenced)),
        distractor_articles=_canonical_articles(distractors),
        seed_questions=tuple(seeds),
    )


def load_story_bundle(path: str | Path) -> Story:
    """Load, validate, and canonicalize one story bundle file."""
    path = Path(path)
    try:
        raw = path.read_text("utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read bundle {path}: {exc}") from exc
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bundle {path} is not valid JSON: {exc}") from exc
    return story_from_dict(payload)


def _article_to_dict(article: Article) -> dict:
    payload: dict = {
        "id": article.id,
        "source_id": article.source_id,
        "headline": article.headline,
        "content": article.content,
        "published_at": format_timestamp(article.published_at),
    }
    if article.summary is not None:
        payload["summary"] = article.summary
    if article.url is not None:
        payload["url"] = article.url
    return payload


def story_to_bundle(story: Story) -> dict:
    """Inverse of story_from_dict, up to canonical ordering."""
    payload: dict = {
        "id": story.id,
        "title": story.title,
        "sources": [{"id": s.id, "display_name": s.display_name} for s in story.sources],
        "articles": [_article_to_dict(a) for a in story.articles],
    }
    if story.distractor_articles:
        payload["distractors"] = [_article_to_dict(a) for a in story.distractor_articles]
    if story.seed_questions:
        payload["questions"] = [
            {"text": q.text, "start_word": q.start_word} for q in story.seed_questions
        ]
    return payload


def save_story_bundle(story: Story, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(story_to_bundle(story), ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        "utf-8",
    )


def select_summary(story: Story) -> str:
    """The explicit summary of the earliest article that has one, else the
    first three sentences of the earliest article's content."""
    if not story.articles:
        raise ValidationError(f"story {story.id!r} has no articles")
    for article in story.articles:
        if article.summary:
            return article.summary
    content = story.articles[0].content
    spans = sentence_spans(content)[:SUMMARY_LEAD_SENTENCES]
    return " ".join(content[s:e] for s, e in spans)


def select_distractors(
    story: Story,
    archive: list[Article] | tuple[Article, ...],
    n: int = DEFAULT_DISTRACTOR_COUNT,
    cutoff_days: int = DEFAULT_CUTOFF_DAYS,
) -> DistractorSet:
    """The n most recent archive articles at least cutoff_days older than the
    story's earliest article. Returns fewer, flagged, when the archive is thin."""
    if not archive:
        logger.warning("empty archive: story %s gets no distractors", story.id)
        return DistractorSet(articles=(), cutoff_days=cutoff_days, insufficient=True)
    earliest = story.articles[0].published_at
    horizon = timedelta(days=cutoff_days)
    eligible = [a for a in archive if earliest - a.published_at >= horizon]
    eligible.sort(key=lambda a: a.id)
    eligible.sort(key=lambda a: a.published_at, reverse=True)
    chosen = tuple(eligible[:n])
    insufficient = len(chosen) < n
    if insufficient:
        logger.warning(
            "story %s: only %d of %d requested distractors available", story.id, len(chosen), n
        )
    return DistractorSet(articles=chosen, cutoff_days=cutoff_days, insufficient=insufficient)
