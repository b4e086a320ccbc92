"""Per-story orchestration: generate candidates, extract per-source answers,
consolidate, categorize, and assemble the persisted analysis.

Given the same bundle, config, and reference providers the output is
byte-identical across runs and machines: QA calls fan out over a thread
pool but results merge in canonical article order, and the analysis
timestamp derives from the story itself rather than the wall clock.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from typing import Mapping, Sequence

from .categorize import Category, CategoryLabel, QuestionStats, categorize_question
from .config import RunConfig
from .consolidation import (
    Grouping,
    GroupingMethod,
    build_similarity_matrix,
    louvain_cluster,
)
from .corpus import Article, DistractorSet, Story, select_distractors, select_summary
from .errors import AllProvidersDown, MalformedOutput, ProviderUnavailable
from .providers.base import (
    Answer,
    AnswerExtractor,
    CandidateQuestion,
    NoAnswer,
    ProviderSet,
)
from .text import normalized_key, token_f1

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuestionAnalysis:
    question: CandidateQuestion
    answers: tuple[Answer, ...]
    no_answers: tuple[NoAnswer, ...]
    grouping: Grouping
    stats: QuestionStats
    label: CategoryLabel


@dataclass(frozen=True)
class StoryAnalysis:
    story_id: str
    analyzed_at: datetime
    config_fingerprint: str
    questions: tuple[QuestionAnalysis, ...]
    selected: tuple[str, ...]
    warnings: tuple[str, ...]
    provider_identifiers: tuple[str, str, str] = ("", "", "")

    def question_by_id(self, question_id: str) -> QuestionAnalysis:
        for qa in self.questions:
            if qa.question.id == question_id:
                return qa
        raise KeyError(question_id)


def dedup_questions(
    candidates: Sequence[CandidateQuestion],
    near_duplicate_threshold: float = 0.9,
) -> list[CandidateQuestion]:
    """Drop normalized exact duplicates and near-duplicates (token F1 at or
    above the threshold), keeping the first by generation order."""
    kept: list[CandidateQuestion] = []
    seen: set[str] = set()
    for candidate in candidates:
        key = normalized_key(candidate.text)
        if key in seen:
            continue
        if any(token_f1(candidate.text, k.text) >= near_duplicate_threshold for k in kept):
            continue
        seen.add(key)
        kept.append(candidate)
    return kept


def reduce_per_source(
    answers: Sequence[Answer],
    articles: Mapping[str, Article],
) -> tuple[Answer, ...]:
    """At most one answer per source: highest confidence wins, ties go to the
    earliest-published article, then the smallest span start."""
    by_source: dict[str, list[Answer]] = {}
    for answer in answers:
        by_source.setdefault(answer.source_id, []).append(answer)
    kept = []
    for source_answers in by_source.values():
        ranked = sorted(
            source_answers,
            key=lambda a: (
                -a.confidence,
                articles[a.article_id].published_at,
                a.article_id,
                a.char_start,
            ),
        )
        kept.append(ranked[0])
    kept.sort(key=lambda a: (articles[a.article_id].published_at, a.article_id))
    return tuple(kept)


def _extract_over(
    qa: AnswerExtractor,
    question: CandidateQuestion,
    articles: Sequence[Article],
    workers: int,
) -> tuple[list[Answer], list[NoAnswer], list[str]]:
    """Fan QA calls out over a thread pool; merge in input article order so
    the result never depends on scheduling."""

    def call(article: Article):
        try:
            return qa.extract_answer(question, article)
        except (ProviderUnavailable, MalformedOutput) as exc:
            return f"extraction failed for article {article.id}: {exc.__class__.__name__}"

    if len(articles) <= 1 or workers <= 1:
        results = [call(a) for a in articles]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, len(articles))) as pool:
            results = list(pool.map(call, articles))

    answers: list[Answer] = []
    no_answers: list[NoAnswer] = []
    warnings: list[str] = []
    for result in results:
        if isinstance(result, Answer):
            answers.append(result)
        elif isinstance(result, NoAnswer):
            no_answers.append(result)
        else:
            warnings.append(result)
    return answers, no_answers, warnings


def _select_questions(
    analyses: Sequence[QuestionAnalysis], max_selected: int
) -> tuple[str, ...]:
    discord = [qa for qa in analyses if qa.label.label == Category.DISCORD]
    discord.sort(key=lambda qa: (-qa.stats.answering_sources, qa.question.id))
    return tuple(qa.question.id for qa in discord[:max_selected])


def analyze_story(
    story: Story,
    providers: ProviderSet,
    config: RunConfig,
    distractors: DistractorSet | None = None,
    analyzed_at: datetime | None = None,
) -> StoryAnalysis:
    """Run the full analysis for one story.

    Candidates come from the summary for each configured start word, are
    deduplicated, answered against every article, reduced to one answer per
    source, consolidated into groups, and categorized. Per-item provider
    failures degrade gracefully into warnings; a question nothing answered
    lands on the peripheral label by the ordinary rules.
    """
    from .storage import config_fingerprint

    summary = select_summary(story)
    warnings: list[str] = []

    candidates: list[CandidateQuestion] = []
    qg_failures = 0
    for start_word in config.start_words:
        try:
            generated = providers.qg.generate_questions(
                summary, start_word, config.candidates_per_start_word, story_id=story.id
            )
        except (ProviderUnavailable, MalformedOutput) as exc:
            qg_failures += 1
            warnings.append(
                f"question generation failed for start word {start_word.value}: "
                f"{exc.__class__.__name__}"
            )
            continue
        candidates.extend(generated)
    if qg_failures == len(config.start_words):
        raise AllProvidersDown("question generation failed for every start word")
    candidates = dedup_questions(candidates, config.near_duplicate_threshold)

    if distractors is None and story.distractor_articles:
        distractors = select_distractors(
            story,
            story.distractor_articles,
            n=config.category.distractor_count,
            cutoff_days=config.distractor_cutoff_days,
        )
    if distractors is not None and distractors.insufficient:
        warnings.append(
            f"distractor set has {len(distractors.articles)} of "
            f"{config.category.distractor_count} requested articles"
        )

    articles_by_id = {a.id: a for a in story.articles}
    analyses: list[QuestionAnalysis] = []
    for candidate in candidates:
        raw_answers, no_answers, qa_warnings = _extract_over(
            providers.qa, candidate, story.articles, config.qa_workers
        )
        warnings.extend(f"question {candidate.id}: {w}" for w in qa_warnings)
        answers = reduce_per_source(raw_answers, articles_by_id)

        if answers:
            matrix = build_similarity_matrix(candidate, answers, providers.scorer)
            for pair in matrix.imputed_pairs:
                warnings.append(
                    f"question {candidate.id}: scorer failed on pair {pair[0]}/{pair[1]}; "
                    "similarity imputed as 0.0"
                )
            grouping = louvain_cluster(
                matrix,
                config.tau,
                resolution=config.resolution,
                texts={a.id: a.text for a in answers},
            )
        else:
            grouping = Grouping(
                question_id=candidate.id, groups=(), method=GroupingMethod.LOUVAIN
            )

        n_distractor_answers = 0
        if distractors is not None and distractors.articles:
            dis_answers, _, dis_warnings = _extract_over(
                providers.qa, candidate, distractors.articles, config.qa_workers
            )
            warnings.extend(f"question {candidate.id} (distractor): {w}" for w in dis_warnings)
            n_distractor_answers = len(dis_answers)

        stats = QuestionStats(
            n_sources=len(story.sources),
            answering_sources=len({a.source_id for a in answers}),
            n_answers=len(answers),
            largest_group_size=grouping.largest_group_size,
            n_distractor_answers=n_distractor_answers,
        )
        analyses.append(
            QuestionAnalysis(
                question=candidate,
                answers=answers,
                no_answers=tuple(no_answers),
                grouping=grouping,
                stats=stats,
                label=categorize_question(stats, config.category),
            )
        )

    if analyzed_at is None:
        # Story-derived timestamp keeps repeated runs byte-identical.
        analyzed_at = max(a.published_at for a in story.articles)

    return StoryAnalysis(
        story_id=story.id,
        analyzed_at=analyzed_at,
        config_fingerprint=config_fingerprint(config, providers.identifiers),
        questions=tuple(analyses),
        selected=_select_questions(analyses, config.max_selected),
        warnings=tuple(warnings),
        provider_identifiers=providers.identifiers,
    )
