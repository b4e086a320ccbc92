#!/usr/bin/env python3
"""The measurement toolbox: pair expansion, classification metrics,
annotator agreement, and the discord-rate scorecard.

Run from the repository root: python demos/06_measurement_tools.py
"""

import random

from newsdiscord import (
    adjusted_rand_index,
    aggregate_annotations,
    balanced_accuracy,
    pairs_from_grouping,
    pearson,
)
from newsdiscord.categorize import Category
from newsdiscord.consolidation import AnswerGroup, Grouping, GroupingMethod
from newsdiscord.evalharness import (
    RunRecord,
    agreement_leave_one_out,
    discord_rate_report,
    render_scorecard,
)
from newsdiscord.providers import StartWord


def grouping_of(groups, label_invalid=()):
    return Grouping(
        question_id="q-demo",
        groups=tuple(
            AnswerGroup(
                member_ids=tuple(sorted(members)),
                representative_id=min(members),
                label="-1" if i in label_invalid else None,
            )
            for i, members in enumerate(groups)
        ),
        method=GroupingMethod.ANNOTATED,
    )


# Pair expansion: a partition of n answers yields n(n-1)/2 labeled pairs,
# positive when both answers share a group.
grouping = grouping_of([["a", "b", "c"], ["d", "e"], ["f"]])
pairs = pairs_from_grouping(grouping)
positives = sum(p.gold for p in pairs)
print(f"6 answers -> {len(pairs)} pairs, {positives} positive")

# Balanced accuracy scores a similarity model against those pairs at a
# fixed threshold; it averages the per-class recalls so imbalance cannot
# hide mistakes on the rarer class.
rng = random.Random(7)
scored = [
    type(p)(p.question_id, p.answer_a, p.answer_b, p.gold,
            score=0.35 * p.gold + rng.uniform(0.1, 0.55))
    for p in pairs
]
print(f"balanced accuracy at 0.5: {balanced_accuracy(scored, 0.5):.3f}")

# Graded similarity backends are checked by correlation instead.
targets = [2.0, 4.5, 1.0, 3.5, 5.0, 2.5]
scores = [0.3, 0.9, 0.2, 0.6, 0.95, 0.4]
print(f"correlation on graded pairs: {pearson(scores, targets):.3f}")

# Multiple annotators group the same answers; majority voting plus
# clustering aggregates them into global groups, and a "-1" marks answers
# an annotator judged invalid.
annotator_1 = grouping_of([["a", "b", "c"], ["d", "e"], ["f"]])
annotator_2 = grouping_of([["a", "b", "c"], ["d", "e", "f"]])
annotator_3 = grouping_of([["a", "b"], ["c"], ["d", "e"], ["f"]], label_invalid=(1,))
global_groups = aggregate_annotations([annotator_1, annotator_2, annotator_3])
print("\nglobal groups:", [g.member_ids for g in global_groups.groups])

# Agreement uses the adjusted rand index between each annotator and the
# aggregate of the others.
print(f"ARI annotator 1 vs 2: {adjusted_rand_index(annotator_1, annotator_2):.3f}")
report = agreement_leave_one_out([annotator_1, annotator_2, annotator_3])
print(f"leave-one-out agreement: mean {report.mean:.3f}, per annotator "
      f"{[round(v, 3) for v in report.per_annotator]}")

# The scorecard summarizes an evaluation run: the share of questions that
# came out discord, per generation system and start word.
records = []
rates = {
    "question-writer-a": {"Why": 64, "How": 49, "What": 65, "Who": 14},
    "human-written": {"Why": 87, "How": 73, "What": 66, "Who": 27},
}
for system, per_word in rates.items():
    for word, rate in per_word.items():
        for i in range(100):
            records.append(
                RunRecord(
                    story_id=f"story-{i:03d}",
                    system=system,
                    start_word=StartWord(word),
                    label=Category.DISCORD if i < rate else Category.CONSENSUS,
                )
            )
print("\n" + render_scorecard(discord_rate_report(records)))
