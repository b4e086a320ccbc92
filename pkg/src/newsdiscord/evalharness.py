"""Measurement machinery: pair expansion, classification and agreement
metrics, and the per-start-word discord-rate scorecard."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .categorize import Category
from .consolidation import (
    Grouping,
    LabeledPair,
    aggregate_annotations,
    restrict_grouping,
)
from .errors import (
    InputError,
    MismatchedAnswerSets,
    OneClassOnly,
    ParseError,
    ZeroVariance,
)
from .providers.base import START_WORDS, StartWord

logger = logging.getLogger(__name__)

__all__ = [
    "AgreementReport",
    "DiscordScorecard",
    "LabeledPair",
    "MetricReport",
    "ScorecardCell",
    "adjusted_rand_index",
    "agreement_leave_one_out",
    "balanced_accuracy",
    "discord_rate_report",
    "load_run_records",
    "pairs_from_grouping",
    "pearson",
    "render_scorecard",
]


@dataclass(frozen=True)
class MetricReport:
    n: int
    balanced_accuracy: float | None = None
    pearson: float | None = None
    ari: float | None = None
    threshold_used: float | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "balanced_accuracy": self.balanced_accuracy,
            "pearson": self.pearson,
            "ari": self.ari,
            "threshold_used": self.threshold_used,
        }


def pairs_from_grouping(grouping: Grouping) -> list[LabeledPair]:
    """Expand a partition into all n(n-1)/2 unordered answer pairs, labeled
    1 when both answers share a group."""
    ids = grouping.answer_ids()
    membership = {}
    for idx, group in enumerate(grouping.groups):
        for member in group.member_ids:
            membership[member] = idx
    pairs = []
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            pairs.append(
                LabeledPair(
                    question_id=grouping.question_id,
                    answer_a=a,
                    answer_b=b,
                    gold=1 if membership[a] == membership[b] else 0,
                )
            )
    return pairs


def balanced_accuracy(
    pairs: Sequence[LabeledPair],
    threshold: float,
    positive_when_equal: bool = True,
) -> float:
    """Mean of true-positive and true-negative rate with prediction
    score >= threshold (ties positive by default, flippable)."""
    if not pairs:
        raise InputError("balanced accuracy needs at least one pair")
    if any(p.score is None for p in pairs):
        raise InputError("all pairs need scores")
    tp = fp = tn = fn = 0
    for pair in pairs:
        pred = pair.score >= threshold if positive_when_equal else pair.score > threshold
        if pair.gold == 1:
            tp += pred
            fn += not pred
        else:
            fp += pred
            tn += not pred
    if tp + fn == 0 or tn + fp == 0:
        raise OneClassOnly("balanced accuracy needs both gold classes")
    return (tp / (tp + fn) + tn / (tn + fp)) / 2.0


def pearson(scores: Sequence[float], targets: Sequence[float]) -> float:
    """Product-moment correlation in [-1, 1]."""
    if len(scores) != len(targets):
        raise InputError("score and target lengths differ")
    if len(scores) < 2:
        raise InputError("correlation needs at least two points")
    x = np.asarray(scores, dtype=float)
    y = np.asarray(targets, dtype=float)
    dx = x - x.mean()
    dy = y - y.mean()
    denom = np.sqrt((dx * dx).sum() * (dy * dy).sum())
    if denom == 0.0:
        raise ZeroVariance("correlation is undefined for constant inputs")
    return float(np.clip((dx * dy).sum() / denom, -1.0, 1.0))


def _contingency(g1: Grouping, g2: Grouping) -> np.ndarray:
    labels1 = {m: i for i, g in enumerate(g1.groups) for m in g.member_ids}
    labels2 = {m: i for i, g in enumerate(g2.groups) for m in g.member_ids}
    table = np.zeros((len(g1.groups), len(g2.groups)), dtype=int)
    for member, row in labels1.items():
        table[row, labels2[member]] += 1
    return table


def adjusted_rand_index(g1: Grouping, g2: Grouping) -> float:
    """Chance-corrected partition agreement from the contingency table.

    All contingency quantities are integers, so the ratio is formed in
    exact integer arithmetic with a single final division.
    """
    ids1, ids2 = g1.answer_ids(), g2.answer_ids()
    if ids1 != ids2:
        raise MismatchedAnswerSets("groupings cover different answer sets")
    n = len(ids1)
    if n < 2:
        raise InputError("adjusted rand index needs at least two answers")
    table = _contingency(g1, g2)
    index = sum(comb(int(v), 2) for v in table.flat)
    sum_rows = sum(comb(int(v), 2) for v in table.sum(axis=1))
    sum_cols = sum(comb(int(v), 2) for v in table.sum(axis=0))
    total = comb(n, 2)
    # (index - expected) / (max_index - expected), cleared of denominators
    numerator = 2 * (index * total - sum_rows * sum_cols)
    denominator = total * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols
    if denominator == 0:
        # Both partitions degenerate in the same way; identical pair sets
        # mean perfect agreement.
        return 1.0 if index == sum_rows == sum_cols else 0.0
    return numerator / denominator


@dataclass(frozen=True)
class AgreementReport:
    per_annotator: tuple[float, ...]
    mean: float


def agreement_leave_one_out(annotations: Sequence[Grouping]) -> AgreementReport:
    """Per-annotator agreement against the aggregate of the other annotators.

    Each annotator's grouping (minus invalid answers) is compared by ARI to
    the aggregation of everyone else, restricted to the answers both sides
    kept.
    """
    if len(annotations) < 3:
        raise InputError("leave-one-out agreement needs at least three annotators")
    scores = []
    for held_out_index, held_out in enumerate(annotations):
        others = [g for i, g in enumerate(annotations) if i != held_out_index]
        reference = aggregate_annotations(others)
        own = restrict_grouping(
            held_out, {m for g in held_out.groups if g.label != "-1" for m in g.member_ids}
        )
        common = set(own.answer_ids()) & set(reference.answer_ids())
        if len(common) < 2:
            raise InputError(
                f"annotator {held_out_index} shares fewer than two valid answers with the rest"
            )
        scores.append(
            adjusted_rand_index(
                restrict_grouping(own, common), restrict_grouping(reference, common)
            )
        )
    return AgreementReport(per_annotator=tuple(scores), mean=float(np.mean(scores)))


@dataclass(frozen=True)
class RunRecord:
    """One categorized question from an evaluation run."""

    story_id: str
    system: str
    start_word: StartWord
    label: Category
    question_id: str = ""


@dataclass(frozen=True)
class ScorecardCell:
    counts: Mapping[str, int]
    percent_discord: float

    @property
    def n_questions(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class DiscordScorecard:
    """Percent of discord labels per system and start word, with a macro
    average across the four start words."""

    systems: tuple[str, ...]
    start_words: tuple[StartWord, ...]
    cells: Mapping[tuple[str, str], ScorecardCell]
    averages: Mapping[str, float]
    n_stories: int
    missing_cells: tuple[tuple[str, str, str], ...] = ()

    def to_dict(self) -> dict:
        return {
            "systems": list(self.systems),
            "start_words": [w.value for w in self.start_words],
            "cells": {
                f"{system}/{word}": {
                    "counts": dict(cell.counts),
                    "percent_discord": cell.percent_discord,
                }
                for (system, word), cell in sorted(self.cells.items())
            },
            "averages": dict(self.averages),
            "n_stories": self.n_stories,
            "missing_cells": [list(m) for m in self.missing_cells],
        }


def discord_rate_report(
    records: Sequence[RunRecord],
    start_words: Sequence[StartWord] = START_WORDS,
) -> DiscordScorecard:
    """Build the per-start-word discord-rate scorecard for an evaluation run.

    Any (story, start_word, system) cell without a categorized question is
    reported as missing and excluded; the average per system is the
    unweighted mean of its start-word percentages.
    """
    if not records:
        raise InputError("scorecard needs at least one record")
    systems = tuple(sorted({r.system for r in records}))
    stories = tuple(sorted({r.story_id for r in records}))
    words = tuple(start_words)

    by_cell: dict[tuple[str, str], list[RunRecord]] = {}
    present: set[tuple[str, str, str]] = set()
    for record in records:
        by_cell.setdefault((record.system, record.start_word.value), []).append(record)
        present.add((record.story_id, record.start_word.value, record.system))

    missing = tuple(
        (story, word.value, system)
        for story in stories
        for word in words
        for system in systems
        if (story, word.value, system) not in present
    )
    for story, word, system in missing:
        logger.warning("no categorized question for story=%s start_word=%s system=%s", story, word, system)

    cells: dict[tuple[str, str], ScorecardCell] = {}
    averages: dict[str, float] = {}
    for system in systems:
        rates = []
        for word in words:
            cell_records = by_cell.get((system, word.value), [])
            if not cell_records:
                continue
            counts = {category.value: 0 for category in Category}
            for record in cell_records:
                counts[record.label.value] += 1
            percent = 100.0 * counts[Category.DISCORD.value] / len(cell_records)
            cells[(system, word.value)] = ScorecardCell(counts=counts, percent_discord=percent)
            rates.append(percent)
        if rates:
            averages[system] = float(sum(rates) / len(rates))
    return DiscordScorecard(
        systems=systems,
        start_words=words,
        cells=cells,
        averages=averages,
        n_stories=len(stories),
        missing_cells=missing,
    )


def render_scorecard(scorecard: DiscordScorecard) -> str:
    """Aligned text table, one decimal place; machine output keeps full
    precision via to_dict."""
    headers = ["system"] + [w.value for w in scorecard.start_words] + ["Avg."]
    rows = []
    for system in scorecard.systems:
        row = [system]
        for word in scorecard.start_words:
            cell = scorecard.cells.get((system, word.value))
            row.append("-" if cell is None else f"{cell.percent_discord:.1f}")
        average = scorecard.averages.get(system)
        row.append("-" if average is None else f"{average:.1f}")
        rows.append(row)
    widths = [max(len(r[i]) for r in [headers] + rows) for i in range(len(headers))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def load_run_records(run_dir: str | Path) -> list[RunRecord]:
    """Read categorized-question records from every *.json file in a run
    directory. Each file holds a list of {story_id, system, start_word,
    label, question_id?} objects."""
    run_dir = Path(run_dir)
    records = []
    for path in sorted(run_dir.glob("*.json")):
        try:
            payload = json.loads(path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read run file {path}: {exc}") from exc
        if not isinstance(payload, list):
            raise ParseError(f"run file {path} must hold a list of records")
        for entry in payload:
            try:
                records.append(
                    RunRecord(
                        story_id=str(entry["story_id"]),
                        system=str(entry["system"]),
                        start_word=StartWord(str(entry["start_word"])),
                        label=Category(str(entry["label"])),
                        question_id=str(entry.get("question_id", "")),
                    )
                )
            except (KeyError, ValueError) as exc:
                raise ParseError(f"bad record in {path}: {entry!r}") from exc
    return records
