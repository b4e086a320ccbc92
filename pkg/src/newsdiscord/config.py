"""Run configuration: thresholds, provider wiring, candidate counts.

A run config file is JSON; every field is optional and falls back to the
defaults below. Remote provider addresses may also come from the
NEWSDISCORD_QG_URL / NEWSDISCORD_QA_URL / NEWSDISCORD_SCORER_URL
environment variables.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .categorize import CategoryConfig
from .consolidation import DEFAULT_RESOLUTION, DEFAULT_TAU
from .corpus import DEFAULT_CUTOFF_DAYS, Story
from .errors import InputError, ParseError
from .providers import (
    FixtureQuestionProvider,
    LexicalAnswerExtractor,
    ProviderSet,
    RemoteAnswerExtractor,
    RemotePairScorer,
    RemoteQuestionGenerator,
    START_WORDS,
    StartWord,
    TemplateQuestionProvider,
    TokenF1Scorer,
)

ENV_QG_URL = "NEWSDISCORD_QG_URL"
ENV_QA_URL = "NEWSDISCORD_QA_URL"
ENV_SCORER_URL = "NEWSDISCORD_SCORER_URL"


@dataclass(frozen=True)
class RunConfig:
    category: CategoryConfig = field(default_factory=CategoryConfig)
    tau: float = DEFAULT_TAU
    resolution: float = DEFAULT_RESOLUTION
    candidates_per_start_word: int = 5
    max_selected: int = 8
    start_words: tuple[StartWord, ...] = START_WORDS
    near_duplicate_threshold: float = 0.9
    distractor_cutoff_days: int = DEFAULT_CUTOFF_DAYS
    qa_workers: int = 4
    qg_provider: str = "fixture"    # fixture | template | remote
    qa_provider: str = "lexical"    # lexical | remote
    scorer_provider: str = "lexical"  # lexical | remote
    qg_url: str | None = None
    qa_url: str | None = None
    scorer_url: str | None = None

    def to_dict(self) -> dict:
        return {
            "category": {
                "coverage_min": self.category.coverage_min,
                "consensus_share": self.category.consensus_share,
                "spec_min": self.category.spec_min,
                "epsilon": self.category.epsilon,
                "distractor_count": self.category.distractor_count,
            },
            "tau": self.tau,
            "resolution": self.resolution,
            "candidates_per_start_word": self.candidates_per_start_word,
            "max_selected": self.max_selected,
            "start_words": [w.value for w in self.start_words],
            "near_duplicate_threshold": self.near_duplicate_threshold,
            "distractor_cutoff_days": self.distractor_cutoff_days,
            "qa_workers": self.qa_workers,
            "qg_provider": self.qg_provider,
            "qa_provider": self.qa_provider,
            "scorer_provider": self.scorer_provider,
            "qg_url": self.qg_url,
            "qa_url": self.qa_url,
            "scorer_url": self.scorer_url,
        }


def config_from_dict(payload: dict) -> RunConfig:
    base = RunConfig()
    category = CategoryConfig(**(payload.get("category") or {}))
    known = {
        "tau",
        "resolution",
        "candidates_per_start_word",
        "max_selected",
        "near_duplicate_threshold",
        "distractor_cutoff_days",
        "qa_workers",
        "qg_provider",
        "qa_provider",
        "scorer_provider",
        "qg_url",
        "qa_url",
        "scorer_url",
    }
    overrides = {k: payload[k] for k in known if k in payload}
    if "start_words" in payload:
        overrides["start_words"] = tuple(StartWord(w) for w in payload["start_words"])
    return replace(base, category=category, **overrides)


def load_run_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        payload = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError(f"config {path} must hold an object")
    return config_from_dict(payload)


def make_providers(config: RunConfig, story: Story | None = None) -> ProviderSet:
    """Wire the provider set a run uses; the fixture generator is bound to
    the story whose bundle holds the seed questions."""
    if config.qg_provider == "fixture":
        if story is None:
            raise InputError("the fixture question provider needs a story")
        qg = FixtureQuestionProvider(story)
    elif config.qg_provider == "template":
        qg = TemplateQuestionProvider()
    elif config.qg_provider == "remote":
        url = config.qg_url or os.environ.get(ENV_QG_URL)
        if not url:
            raise InputError("remote question generation needs qg_url")
        qg = RemoteQuestionGenerator(url)
    else:
        raise InputError(f"unknown qg_provider {config.qg_provider!r}")

    if config.qa_provider == "lexical":
        qa = LexicalAnswerExtractor()
    elif config.qa_provider == "remote":
        url = config.qa_url or os.environ.get(ENV_QA_URL)
        if not url:
            raise InputError("remote answer extraction needs qa_url")
        qa = RemoteAnswerExtractor(url)
    else:
        raise InputError(f"unknown qa_provider {config.qa_provider!r}")

    if config.scorer_provider == "lexical":
        scorer = TokenF1Scorer()
    elif config.scorer_provider == "remote":
        url = config.scorer_url or os.environ.get(ENV_SCORER_URL)
        if not url:
            raise InputError("remote pair scoring needs scorer_url")
        scorer = RemotePairScorer(url)
    else:
        raise InputError(f"unknown scorer_provider {config.scorer_provider!r}")

    return ProviderSet(qg=qg, qa=qa, scorer=scorer)
