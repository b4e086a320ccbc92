"""Four-way question triage: peripheral, consensus, vague, or discord.

Rules fire in a fixed order. A question answered by no one, or by fewer
than 30% of sources, is peripheral. If one answer group holds at least 70%
of answers it is consensus. If the specificity score against distractor
articles is at most 2 it is vague. Everything else is discord: widely
answered, answered diversely, and specific to the story. All cutoffs are
inclusive exactly as stated and config-exposed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InputError


class Category(str, Enum):
    PERIPHERAL = "peripheral"
    CONSENSUS = "consensus"
    VAGUE = "vague"
    DISCORD = "discord"


@dataclass(frozen=True)
class CategoryConfig:
    coverage_min: float = 0.30
    consensus_share: float = 0.70
    spec_min: float = 2.0
    epsilon: float = 0.001
    distractor_count: int = 10

    def __post_init__(self) -> None:
        if not 0.0 < self.coverage_min < 1.0:
            raise InputError(f"coverage_min {self.coverage_min} outside (0, 1)")
        if not 0.0 < self.consensus_share <= 1.0:
            raise InputError(f"consensus_share {self.consensus_share} outside (0, 1]")
        if self.epsilon <= 0.0:
            raise InputError("epsilon must be positive")
        if self.distractor_count < 0:
            raise InputError("distractor_count must be nonnegative")


@dataclass(frozen=True)
class QuestionStats:
    """Counts a label decision is made from; derived per analyzed question."""

    n_sources: int
    answering_sources: int
    n_answers: int
    largest_group_size: int
    n_distractor_answers: int = 0

    def __post_init__(self) -> None:
        if self.n_sources < 1:
            raise InputError("a story has at least one source")
        if not 0 <= self.answering_sources <= self.n_sources:
            raise InputError("answering_sources outside [0, n_sources]")
        if not 0 <= self.largest_group_size <= self.n_answers:
            raise InputError("largest_group_size outside [0, n_answers]")
        if self.n_distractor_answers < 0:
            raise InputError("n_distractor_answers must be nonnegative")


@dataclass(frozen=True)
class CategoryLabel:
    label: Category
    reasons: tuple[str, ...]


def coverage_ratio(stats: QuestionStats) -> float:
    """Fraction of distinct sources that answered."""
    return stats.answering_sources / stats.n_sources


def specificity(n_answers: int, n_distractor_answers: int, epsilon: float) -> float:
    """Ratio of story answers to distractor-article answers.

    Large when distractor articles rarely answer; the epsilon keeps the
    ratio finite when they never do.
    """
    if n_answers < 0 or n_distractor_answers < 0:
        raise InputError("answer counts must be nonnegative")
    if epsilon <= 0.0:
        raise InputError("epsilon must be positive")
    return n_answers / (n_distractor_answers + epsilon)


def categorize_question(stats: QuestionStats, config: CategoryConfig) -> CategoryLabel:
    """Assign exactly one label, applying the rules in precedence order.

    The reasons list records every rule whose condition holds, even when an
    earlier rule already decided the label.
    """
    reasons: list[str] = []
    if stats.n_answers == 0:
        reasons.append("no_answers")
    if coverage_ratio(stats) < config.coverage_min:
        reasons.append("low_coverage")
    consensus = (
        stats.n_answers > 0
        and stats.largest_group_size / stats.n_answers >= config.consensus_share
    )
    if consensus:
        reasons.append("dominant_answer_group")
    vague = (
        specificity(stats.n_answers, stats.n_distractor_answers, config.epsilon)
        <= config.spec_min
    )
    if vague:
        reasons.append("low_specificity")

    if "no_answers" in reasons or "low_coverage" in reasons:
        label = Category.PERIPHERAL
    elif consensus:
        label = Category.CONSENSUS
    elif vague:
        label = Category.VAGUE
    else:
        label = Category.DISCORD
        reasons.append("all_filters_passed")
    return CategoryLabel(label=label, reasons=tuple(reasons))
