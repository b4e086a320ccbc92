"""HTTP API over a bundle directory and an analysis store.

Endpoints:
  GET  /healthz
  GET  /stories                      -> [{id, title, n_sources, analyzed}]
  GET  /stories/{id}/analysis        -> public analysis payload (below)
  POST /stories/{id}/analyze         -> 202 and the analysis becomes retrievable

The public payload carries, per question, its label and stats plus ordered
answer groups (representative first-class, members with source attribution
and URLs), and a precomputed question-by-source grid for matrix views.
"""

from __future__ import annotations

import logging
import threading
from pathlib import Path

from fastapi import BackgroundTasks, FastAPI
from fastapi.responses import JSONResponse

from .config import RunConfig, make_providers
from .corpus import Story, format_timestamp, load_story_bundle
from .errors import NewsDiscordError, NotFound
from .pipeline import StoryAnalysis, analyze_story
from .storage import AnalysisStore, config_fingerprint

logger = logging.getLogger(__name__)


def grid_payload(story: Story, analysis: StoryAnalysis) -> dict:
    """Question-by-source matrix over the selected questions.

    Rows follow selection order; columns are sources ordered by how many
    selected questions they answered (descending), ties alphabetical by id.
    """
    rows = list(analysis.selected)
    answered: dict[tuple[str, str], dict] = {}
    for question_id in rows:
        qa = analysis.question_by_id(question_id)
        group_index = {
            member: idx for idx, group in enumerate(qa.grouping.groups) for member in group.member_ids
        }
        for answer in qa.answers:
            article = story.article_by_id(answer.article_id)
            answered[(question_id, answer.source_id)] = {
                "answered": True,
                "group_index": group_index[answer.id],
                "answer_text": answer.text,
                "url": article.url,
            }

    def answered_count(source_id: str) -> int:
        return sum(1 for q in rows if (q, source_id) in answered)

    cols = sorted((s.id for s in story.sources), key=lambda sid: (-answered_count(sid), sid))
    cells = [
        [answered.get((question_id, source_id), {"answered": False}) for source_id in cols]
        for question_id in rows
    ]
    return {"rows": rows, "cols": cols, "cells": cells}


def public_analysis_payload(story: Story, analysis: StoryAnalysis) -> dict:
    """The reader-facing analysis schema served over the API."""
    sources = [{"id": s.id, "display_name": s.display_name} for s in story.sources]
    display_names = {s.id: s.display_name for s in story.sources}

    questions = []
    for qa in analysis.questions:
        answers_by_id = {a.id: a for a in qa.answers}

        def member_payload(answer_id: str) -> dict:
            answer = answers_by_id[answer_id]
            article = story.article_by_id(answer.article_id)
            return {
                "answer_id": answer_id,
                "text": answer.text,
                "source_id": answer.source_id,
                "source_name": display_names.get(answer.source_id, answer.source_id),
                "article_id": answer.article_id,
                "url": article.url,
            }

        groups = [
            {
                "representative": member_payload(group.representative_id),
                "members": [member_payload(m) for m in group.member_ids],
            }
            for group in qa.grouping.groups
        ]
        questions.append(
            {
                "id": qa.question.id,
                "text": qa.question.text,
                "start_word": qa.question.start_word.value,
                "label": qa.label.label.value,
                "reasons": list(qa.label.reasons),
                "stats": {
                    "n_sources": qa.stats.n_sources,
                    "answering_sources": qa.stats.answering_sources,
                    "n_answers": qa.stats.n_answers,
                    "largest_group_size": qa.stats.largest_group_size,
                    "n_distractor_answers": qa.stats.n_distractor_answers,
                },
                "groups": groups,
            }
        )
    return {
        "story_id": analysis.story_id,
        "title": story.title,
        "analyzed_at": format_timestamp(analysis.analyzed_at),
        "config_fingerprint": analysis.config_fingerprint,
        "sources": sources,
        "selected": list(analysis.selected),
        "questions": questions,
        "grid": grid_payload(story, analysis),
        "warnings": list(analysis.warnings),
    }


class _ServiceState:
    def __init__(self, store: AnalysisStore, bundles_dir: Path, config: RunConfig):
        self.store = store
        self.bundles_dir = bundles_dir
        self.config = config
        self.inflight: set[str] = set()
        self.inflight_guard = threading.Lock()

    def stories(self) -> list[Story]:
        stories = []
        for path in sorted(self.bundles_dir.glob("*.json")):
            try:
                stories.append(load_story_bundle(path))
            except NewsDiscordError as exc:
                logger.warning("skipping unreadable bundle %s: %s", path, exc)
        return stories

    def story(self, story_id: str) -> Story | None:
        for story in self.stories():
            if story.id == story_id:
                return story
        return None

    def fingerprint_for(self, story: Story) -> str:
        providers = make_providers(self.config, story)
        return config_fingerprint(self.config, providers.identifiers)


def create_app(
    store: AnalysisStore | str | Path,
    bundles_dir: str | Path,
    config: RunConfig | None = None,
) -> FastAPI:
    if not isinstance(store, AnalysisStore):
        store = AnalysisStore(store)
    state = _ServiceState(store, Path(bundles_dir), config or RunConfig())
    app = FastAPI(title="newsdiscord", version="0.1.0")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/stories")
    def list_stories() -> list[dict]:
        out = []
        for story in state.stories():
            out.append(
                {
                    "id": story.id,
                    "title": story.title,
                    "n_sources": len(story.sources),
                    "analyzed": state.store.exists(story.id, state.fingerprint_for(story)),
                }
            )
        return out

    @app.get("/stories/{story_id}/analysis")
    def get_analysis(story_id: str):
        story = state.story(story_id)
        if story is None:
            return JSONResponse({"detail": "unknown story"}, status_code=404)
        try:
            analysis = state.store.load(story_id, state.fingerprint_for(story))
        except NotFound:
            return JSONResponse({"detail": "analysis not found"}, status_code=404)
        return public_analysis_payload(story, analysis)

    def run_analysis(story: Story) -> None:
        try:
            providers = make_providers(state.config, story)
            analysis = analyze_story(story, providers, state.config)
            state.store.store(analysis, state.config)
        except NewsDiscordError as exc:
            logger.error("analysis of story %s failed: %s", story.id, exc)
        finally:
            with state.inflight_guard:
                state.inflight.discard(story.id)

    @app.post("/stories/{story_id}/analyze")
    def post_analyze(story_id: str, background: BackgroundTasks):
        story = state.story(story_id)
        if story is None:
            return JSONResponse({"detail": "unknown story"}, status_code=404)
        if state.store.exists(story_id, state.fingerprint_for(story)):
            return JSONResponse({"status": "already_analyzed"}, status_code=200)
        with state.inflight_guard:
            if story_id in state.inflight:
                return JSONResponse({"status": "in_progress"}, status_code=202)
            state.inflight.add(story_id)
        background.add_task(run_analysis, story)
        return JSONResponse({"status": "scheduled"}, status_code=202)

    return app
