#!/usr/bin/env python3
"""The four-way question triage: peripheral, consensus, vague, discord.

Run from the repository root: python demos/04_question_triage.py
"""

from newsdiscord import (
    CategoryConfig,
    QuestionStats,
    categorize_question,
    coverage_ratio,
    specificity,
)

config = CategoryConfig()
print(
    f"cutoffs: coverage >= {config.coverage_min:.0%} of sources, consensus at "
    f">= {config.consensus_share:.0%} of answers in one group, vague at "
    f"specificity <= {config.spec_min}"
)

# Each scenario is the per-question bookkeeping the pipeline derives:
# how many sources the story has, how many answered, how the answers
# grouped, and how many answers the distractor articles produced.
scenarios = [
    ("barely covered", QuestionStats(10, 2, 2, 1, 0)),
    ("everyone says the same", QuestionStats(10, 8, 8, 7, 0)),
    ("three camps, story-specific", QuestionStats(10, 8, 8, 3, 0)),
    ("three camps, but old articles answer too", QuestionStats(10, 8, 8, 3, 5)),
]

for name, stats in scenarios:
    label = categorize_question(stats, config)
    print(f"\n{name}:")
    print(
        f"  coverage {coverage_ratio(stats):.0%}, largest group "
        f"{stats.largest_group_size}/{stats.n_answers}, "
        f"specificity {specificity(stats.n_answers, stats.n_distractor_answers, config.epsilon):.2f}"
    )
    print(f"  -> {label.label.value} (reasons fired: {', '.join(label.reasons)})")

# Boundaries are inclusive exactly as documented: 30% coverage is not
# peripheral, a 70% group is consensus, specificity 2.0 is vague.
print("\nboundary behavior:")
print("  3 of 10 sources ->", categorize_question(QuestionStats(10, 3, 3, 1, 0), config).label.value)
print("  7 of 10 in one group ->", categorize_question(QuestionStats(10, 10, 10, 7, 0), config).label.value)
exactly_two = CategoryConfig(epsilon=1.0)
print(
    "  specificity exactly 2.0 ->",
    categorize_question(QuestionStats(10, 8, 8, 3, 3), exactly_two).label.value,
    f"(Spec = {specificity(8, 3, 1.0):.1f})",
)
