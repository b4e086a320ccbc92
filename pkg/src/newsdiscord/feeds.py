"""Feed ingestion: turn aggregator listings into validated Story values.

The feed client interface is pluggable; the reference implementation reads
a directory of recorded responses so ingestion is testable offline. Sources
are identified by the registered domain of each article URL.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol
from urllib.parse import urlparse

from .corpus import Article, Source, Story, parse_timestamp
from .errors import StoryUnavailable, ValidationError
from .text import normalize_text

logger = logging.getLogger(__name__)

SOURCE_MINIMUM = 10
BELOW_SOURCE_MINIMUM = "below_source_minimum"

# Common two-part public suffixes; enough for registered-domain grouping of
# mainstream news URLs without an external suffix database.
_TWO_PART_SUFFIXES = {
    "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk", "net.uk",
    "com.au", "net.au", "org.au", "co.nz", "org.nz",
    "co.jp", "or.jp", "ne.jp", "co.in", "net.in", "org.in",
    "co.kr", "or.kr", "com.br", "org.br", "com.mx", "com.ar",
    "com.cn", "com.tw", "com.hk", "com.sg", "co.za", "co.il",
}


def registered_domain(url: str) -> str:
    """Registered domain of a URL: 'news.bbc.co.uk' -> 'bbc.co.uk'."""
    host = urlparse(url).netloc.split("@")[-1].split(":")[0].lower()
    if host.startswith("www."):
        host = host[4:]
    labels = [p for p in host.split(".") if p]
    if len(labels) <= 2:
        return ".".join(labels)
    if ".".join(labels[-2:]) in _TWO_PART_SUFFIXES:
        return ".".join(labels[-3:])
    return ".".join(labels[-2:])


class FeedClient(Protocol):
    """Minimal aggregator interface used by fetch_story."""

    def list_recent_stories(self) -> list[str]: ...

    def get_story(self, ref: str) -> dict: ...


class DirectoryFeedClient:
    """Feed client backed by recorded responses on disk.

    Layout: root/index.json holds a list of story refs; each ref resolves to
    root/<ref>.json containing {id, title, articles: [{url, headline,
    published_at, body, summary?}]}. A null or empty body marks an article
    whose fetch failed.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def list_recent_stories(self) -> list[str]:
        index = self.root / "index.json"
        if not index.exists():
            return []
        refs = json.loads(index.read_text("utf-8"))
        return sorted(str(r) for r in refs)

    def get_story(self, ref: str) -> dict:
        path = self.root / f"{ref}.json"
        if not path.exists():
            raise StoryUnavailable(f"no recorded story for ref {ref!r}")
        try:
            return json.loads(path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StoryUnavailable(f"cannot read recorded story {ref!r}: {exc}") from exc


@dataclass(frozen=True)
class FetchIssue:
    url: str
    reason: str


@dataclass(frozen=True)
class FetchResult:
    story: Story
    report: tuple[FetchIssue, ...]


def _article_id_for(url: str) -> str:
    import hashlib

    return "a-" + hashlib.sha1(url.encode("utf-8")).hexdigest()[:10]


def fetch_story(feed_client: FeedClient, story_ref: str) -> FetchResult:
    """Download a story listing, map articles to sources by registered
    domain, and return the validated Story plus a fetch report.

    Articles whose body is missing or empty are skipped and recorded in the
    report; stories covered by fewer than 10 distinct sources are flagged.
    """
    payload = feed_client.get_story(story_ref)
    if not isinstance(payload, dict):
        raise StoryUnavailable(f"story {story_ref!r} payload is not an object")
    story_id = str(payload.get("id") or story_ref)
    title = normalize_text(str(payload.get("title") or ""))
    if not title:
        raise StoryUnavailable(f"story {story_ref!r} has no title")

    articles: list[Article] = []
    issues: list[FetchIssue] = []
    for entry in payload.get("articles") or []:
        url = str(entry.get("url") or "")
        if not url:
            issues.append(FetchIssue(url="", reason="missing_url"))
            continue
        body = normalize_text(str(entry.get("body") or ""))
        if not body:
            issues.append(FetchIssue(url=url, reason="empty_content"))
            continue
        domain = registered_domain(url)
        if not domain:
            issues.append(FetchIssue(url=url, reason="unresolvable_source"))
            continue
        summary = normalize_text(str(entry.get("summary") or "")) or None
        try:
            published = parse_timestamp(entry.get("published_at"))
        except ValidationError:
            issues.append(FetchIssue(url=url, reason="bad_timestamp"))
            continue
        articles.append(
            Article(
                id=_article_id_for(url),
                source_id=domain,
                headline=normalize_text(str(entry.get("headline") or "")),
                content=body,
                published_at=published,
                summary=summary,
                url=url,
            )
        )
    if not articles:
        raise StoryUnavailable(f"story {story_ref!r} has no fetchable articles")

    articles.sort(key=lambda a: (a.published_at, a.id))
    domains = sorted({a.source_id for a in articles})
    flags = (BELOW_SOURCE_MINIMUM,) if len(domains) < SOURCE_MINIMUM else ()
    if flags:
        logger.warning("story %s has %d distinct sources (< %d)", story_id, len(domains), SOURCE_MINIMUM)
    story = Story(
        id=story_id,
        title=title,
        articles=tuple(articles),
        sources=tuple(Source(id=d, display_name=d) for d in domains),
        flags=flags,
    )
    # Canonical report order keeps concurrent fetch implementations deterministic.
    report = tuple(sorted(issues, key=lambda i: (i.url, i.reason)))
    return FetchResult(story=story, report=report)
