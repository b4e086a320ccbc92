"""Persist and reload story analyses.

One file per (story id, config fingerprint) in a content-addressed layout:
root/<story_id>/<fingerprint>.json. Records embed a checksum over the
canonical payload encoding, and every load re-derives each question's label
from its own stats to catch silent drift. Writes are atomic and serialized
per story id; reads need no locks because records are immutable.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Sequence

from .categorize import Category, CategoryConfig, CategoryLabel, QuestionStats, categorize_question
from .config import RunConfig, config_from_dict
from .consolidation import AnswerGroup, Grouping, GroupingMethod
from .corpus import format_timestamp, parse_timestamp
from .errors import CorruptRecord, NotFound
from .pipeline import QuestionAnalysis, StoryAnalysis
from .providers.base import Answer, CandidateQuestion, NoAnswer, Origin, StartWord

SCHEMA_VERSION = 1
FINGERPRINT_LENGTH = 12


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def config_fingerprint(config: RunConfig, provider_identifiers: Sequence[str]) -> str:
    """Hash of thresholds and provider identities, preventing silent mixing
    of incompatible analyses under one story id."""
    material = canonical_json(
        {"config": config.to_dict(), "providers": list(provider_identifiers)}
    )
    return hashlib.sha256(material.encode("utf-8")).hexdigest()[:FINGERPRINT_LENGTH]


def _answer_to_dict(answer: Answer) -> dict:
    return {
        "question_id": answer.question_id,
        "source_id": answer.source_id,
        "article_id": answer.article_id,
        "text": answer.text,
        "char_start": answer.char_start,
        "char_end": answer.char_end,
        "confidence": answer.confidence,
    }


def _no_answer_to_dict(no_answer: NoAnswer) -> dict:
    return {
        "question_id": no_answer.question_id,
        "source_id": no_answer.source_id,
        "article_id": no_answer.article_id,
        "confidence": no_answer.confidence,
    }


def _grouping_to_dict(grouping: Grouping) -> dict:
    groups = []
    for group in grouping.groups:
        entry = {
            "member_ids": list(group.member_ids),
            "representative_id": group.representative_id,
        }
        if group.label is not None:
            entry["label"] = group.label
        groups.append(entry)
    return {"method": grouping.method.value, "groups": groups}


def analysis_to_dict(analysis: StoryAnalysis, config: RunConfig) -> dict:
    questions = []
    for qa in analysis.questions:
        questions.append(
            {
                "question": {
                    "id": qa.question.id,
                    "text": qa.question.text,
                    "start_word": qa.question.start_word.value,
                    "story_id": qa.question.story_id,
                    "origin": qa.question.origin.value,
                },
                "answers": [_answer_to_dict(a) for a in qa.answers],
                "no_answers": [_no_answer_to_dict(n) for n in qa.no_answers],
                "grouping": _grouping_to_dict(qa.grouping),
                "stats": {
                    "n_sources": qa.stats.n_sources,
                    "answering_sources": qa.stats.answering_sources,
                    "n_answers": qa.stats.n_answers,
                    "largest_group_size": qa.stats.largest_group_size,
                    "n_distractor_answers": qa.stats.n_distractor_answers,
                },
                "label": {"label": qa.label.label.value, "reasons": list(qa.label.reasons)},
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "story_id": analysis.story_id,
        "analyzed_at": format_timestamp(analysis.analyzed_at),
        "config_fingerprint": analysis.config_fingerprint,
        "config": config.to_dict(),
        "providers": list(analysis.provider_identifiers),
        "questions": questions,
        "selected": list(analysis.selected),
        "warnings": list(analysis.warnings),
    }


def _grouping_from_dict(payload: dict, question_id: str) -> Grouping:
    groups = []
    for entry in payload.get("groups", []):
        groups.append(
            AnswerGroup(
                member_ids=tuple(entry["member_ids"]),
                representative_id=entry["representative_id"],
                label=entry.get("label"),
            )
        )
    return Grouping(
        question_id=question_id,
        groups=tuple(groups),
        method=GroupingMethod(payload["method"]),
    )


def analysis_from_dict(payload: dict) -> tuple[StoryAnalysis, RunConfig]:
    try:
        config = config_from_dict(payload.get("config") or {})
        questions = []
        for entry in payload["questions"]:
            q = entry["question"]
            question = CandidateQuestion(
                id=q["id"],
                text=q["text"],
                start_word=StartWord(q["start_word"]),
                story_id=q["story_id"],
                origin=Origin(q["origin"]),
            )
            answers = tuple(Answer(**a) for a in entry["answers"])
            no_answers = tuple(NoAnswer(**n) for n in entry["no_answers"])
            stats = QuestionStats(**entry["stats"])
            label = CategoryLabel(
                label=Category(entry["label"]["label"]),
                reasons=tuple(entry["label"]["reasons"]),
            )
            questions.append(
                QuestionAnalysis(
                    question=question,
                    answers=answers,
                    no_answers=no_answers,
                    grouping=_grouping_from_dict(entry["grouping"], question.id),
                    stats=stats,
                    label=label,
                )
            )
        providers = payload.get("providers") or ["", "", ""]
        analysis = StoryAnalysis(
            story_id=payload["story_id"],
            analyzed_at=parse_timestamp(payload["analyzed_at"]),
            config_fingerprint=payload["config_fingerprint"],
            questions=tuple(questions),
            selected=tuple(payload.get("selected", [])),
            warnings=tuple(payload.get("warnings", [])),
            provider_identifiers=tuple(providers),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptRecord(f"analysis payload is malformed: {exc}") from exc
    _check_consistency(analysis, config.category)
    return analysis, config


def _check_consistency(analysis: StoryAnalysis, category_config: CategoryConfig) -> None:
    for qa in analysis.questions:
        rederived = categorize_question(qa.stats, category_config)
        if rederived.label != qa.label.label:
            raise CorruptRecord(
                f"stored label {qa.label.label.value!r} for question {qa.question.id} "
                f"disagrees with its stats ({rederived.label.value!r})"
            )
    for selected_id in analysis.selected:
        qa = analysis.question_by_id(selected_id)
        if qa.label.label != Category.DISCORD:
            raise CorruptRecord(f"selected question {selected_id} is not labeled discord")


class AnalysisStore:
    """File-backed analysis store with concurrent readers and per-story
    serialized writers."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock_for(self, story_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(story_id, threading.Lock())

    def path_for(self, story_id: str, fingerprint: str) -> Path:
        return self.root / story_id / f"{fingerprint}.json"

    def store(self, analysis: StoryAnalysis, config: RunConfig) -> Path:
        payload = analysis_to_dict(analysis, config)
        body = canonical_json(payload)
        record = canonical_json(
            {"checksum": hashlib.sha256(body.encode("utf-8")).hexdigest(), "payload": payload}
        )
        path = self.path_for(analysis.story_id, analysis.config_fingerprint)
        with self.lock_for(analysis.story_id):
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(record)
                os.replace(tmp, path)
            finally:
                if os.path.exists(tmp):
                    os.unlink(tmp)
        return path

    def _read_record(self, path: Path) -> tuple[StoryAnalysis, RunConfig]:
        try:
            record = json.loads(path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptRecord(f"cannot decode record {path}: {exc}") from exc
        if not isinstance(record, dict) or "payload" not in record or "checksum" not in record:
            raise CorruptRecord(f"record {path} is missing its envelope")
        body = canonical_json(record["payload"])
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        if digest != record["checksum"]:
            raise CorruptRecord(f"checksum mismatch for {path}")
        return analysis_from_dict(record["payload"])

    def load(self, story_id: str, fingerprint: str | None = None) -> StoryAnalysis:
        analysis, _ = self.load_with_config(story_id, fingerprint)
        return analysis

    def load_with_config(
        self, story_id: str, fingerprint: str | None = None
    ) -> tuple[StoryAnalysis, RunConfig]:
        story_dir = self.root / story_id
        if fingerprint is not None:
            path = self.path_for(story_id, fingerprint)
            if not path.exists():
                raise NotFound(f"no analysis for story {story_id!r} fingerprint {fingerprint!r}")
            return self._read_record(path)
        if not story_dir.is_dir():
            raise NotFound(f"no analysis for story {story_id!r}")
        paths = sorted(story_dir.glob("*.json"))
        if not paths:
            raise NotFound(f"no analysis for story {story_id!r}")
        records = [self._read_record(p) for p in paths]
        # Deterministic choice when several configs analyzed the same story:
        # latest analysis timestamp, then fingerprint order.
        records.sort(key=lambda rc: (rc[0].analyzed_at, rc[0].config_fingerprint))
        return records[-1]

    def exists(self, story_id: str, fingerprint: str | None = None) -> bool:
        if fingerprint is not None:
            return self.path_for(story_id, fingerprint).exists()
        story_dir = self.root / story_id
        return story_dir.is_dir() and any(story_dir.glob("*.json"))

    def list_ids(self) -> list[str]:
        if not self.root.is_dir():
            return []
        return sorted(d.name for d in self.root.iterdir() if d.is_dir() and any(d.glob("*.json")))
