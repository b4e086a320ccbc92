from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

import pytest

from newsdiscord.corpus import Article, SeedQuestion, Source, Story
from newsdiscord.providers.base import Answer

REPO_ROOT = Path(__file__).resolve().parents[1]
CORPUS_DIR = REPO_ROOT / "corpus"
FIXTURES_DIR = Path(__file__).parent / "fixtures"
GOLDEN_DIR = Path(__file__).parent / "golden"


def ts(value: str) -> datetime:
    return datetime.fromisoformat(value.replace("Z", "+00:00")).astimezone(timezone.utc)


def make_article(
    article_id: str,
    source_id: str,
    content: str,
    published_at: str = "2022-03-01T10:00:00Z",
    **kwargs,
) -> Article:
    return Article(
        id=article_id,
        source_id=source_id,
        headline=kwargs.pop("headline", f"headline {article_id}"),
        content=content,
        published_at=ts(published_at),
        **kwargs,
    )


def make_story(articles, seed_questions=(), story_id="test-story", **kwargs) -> Story:
    sources = tuple(
        Source(id=sid, display_name=sid.split(".")[0].title())
        for sid in sorted({a.source_id for a in articles})
    )
    return Story(
        id=story_id,
        title=kwargs.pop("title", "Test story"),
        articles=tuple(sorted(articles, key=lambda a: (a.published_at, a.id))),
        sources=sources,
        seed_questions=tuple(
            SeedQuestion(text=t, start_word=w) for t, w in seed_questions
        ),
        **kwargs,
    )


# A consolidation workload shaped like a large annotated question: 29 answers
# in 8 clusters (sizes 8/5/4/4/3/2/2/1). Within a cluster the texts share
# seven of eight tokens; across clusters the vocabularies are disjoint.
_CLUSTER_BASES = [
    "harbor cranes idled during the overnight storm {v}",
    "council members approved funding for the annex {v}",
    "vaccine shipments reached rural clinics by {v}",
    "quarterly earnings beat analyst expectations on {v}",
    "wildfire crews contained the northern ridge {v}",
    "transit fares will rise next {v}",
    "museum attendance doubled after the {v}",
    "satellite imagery confirmed the glacier {v}",
]
_CLUSTER_SIZES = [8, 5, 4, 4, 3, 2, 2, 1]
_VARIANTS = ["monday", "tuesday", "review", "report", "update", "hearing", "session", "recap"]


def clustered_answers(question_id: str = "q-fixture") -> tuple[list[Answer], list[list[str]]]:
    """29 answers plus the intended cluster structure (lists of answer ids)."""
    answers: list[Answer] = []
    clusters: list[list[str]] = []
    counter = 0
    for base, size in zip(_CLUSTER_BASES, _CLUSTER_SIZES):
        members = []
        for k in range(size):
            text = base.format(v=_VARIANTS[k])
            answer = Answer(
                question_id=question_id,
                source_id=f"src-{counter:02d}",
                article_id=f"art-{counter:02d}",
                text=text,
                char_start=0,
                char_end=len(text),
                confidence=0.9,
            )
            answers.append(answer)
            members.append(answer.id)
            counter += 1
        clusters.append(sorted(members))
    return answers, clusters


@pytest.fixture(scope="session")
def corpus_paths() -> list[Path]:
    return sorted(CORPUS_DIR.glob("*.json"))


@pytest.fixture()
def rates_bundle_path() -> Path:
    return CORPUS_DIR / "central-bank-rates.json"


@pytest.fixture()
def wind_bundle_path() -> Path:
    return CORPUS_DIR / "offshore-wind-bill.json"


def load_json(path: Path):
    return json.loads(path.read_text("utf-8"))
