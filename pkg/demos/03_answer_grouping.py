#!/usr/bin/env python3
"""Answer consolidation: pairwise similarity, graph clustering, group
representatives, and threshold tuning on labeled pairs.

Run from the repository root: python demos/03_answer_grouping.py
"""

import numpy as np

from newsdiscord import (
    LabeledPair,
    TokenF1Scorer,
    build_similarity_matrix,
    consolidate,
    louvain_cluster,
    select_threshold,
)
from newsdiscord.consolidation import SimilarityMatrix
from newsdiscord.providers import Answer

# Answers to one question, as different sources phrased them. Three
# positions: "four increases", "seven increases", and a slower-path outlier.
texts = [
    "The firm expects four rate increases this year.",
    "Markets now expect as many as seven rate increases this year.",
    "The bank will approve four rate increases this year, analysts said.",
    "Strategists see as many as seven rate increases arriving this year.",
    "A slower path of three rate increases remains the base case this year.",
]
answers = [
    Answer(
        question_id="q-demo",
        source_id=f"source-{i}",
        article_id=f"article-{i}",
        text=text,
        char_start=0,
        char_end=len(text),
        confidence=0.8,
    )
    for i, text in enumerate(texts)
]

# Step 1: score every pair in both directions and symmetrize by mean.
matrix = build_similarity_matrix("How many rate increases?", answers, TokenF1Scorer())
print("similarity matrix (token F1, unit scale):")
print(np.array_str(matrix.scores, precision=2, suppress_small=True))

# Step 2: threshold the matrix into a weighted graph and cluster. Edges
# exist where the score reaches tau; isolated answers become singletons.
grouping = louvain_cluster(matrix, tau=0.5, texts={a.id: a.text for a in answers})
print("\ngroups at tau=0.5 (representative marked *):")
for group in grouping.groups:
    for member in group.member_ids:
        marker = "*" if member == group.representative_id else " "
        text = next(a.text for a in answers if a.id == member)
        print(f"  {marker} {text}")
    print()

# consolidate() is the one-call composition of both steps.
same = consolidate("How many rate increases?", answers, TokenF1Scorer(), tau=0.5)
assert [g.member_ids for g in same.groups] == [g.member_ids for g in grouping.groups]

# Raising tau only ever removes edges: groups can split, never merge.
for tau in (0.3, 0.5, 0.8):
    sizes = [g.size for g in louvain_cluster(matrix, tau).groups]
    print(f"group sizes at tau={tau}: {sizes}")

# Step 3: pick tau on validation data. The tuner sweeps midpoints between
# consecutive distinct scores and maximizes balanced accuracy.
pairs = [
    LabeledPair("q", "a1", "a2", 1, score=0.81),
    LabeledPair("q", "a1", "a3", 1, score=0.74),
    LabeledPair("q", "a2", "a3", 1, score=0.66),
    LabeledPair("q", "a1", "a4", 0, score=0.41),
    LabeledPair("q", "a2", "a4", 0, score=0.28),
    LabeledPair("q", "a3", "a4", 0, score=0.52),
]
threshold = select_threshold(pairs, dataset_id="demo-validation")
print(
    f"\ntuned threshold: tau={threshold.tau:.3f} "
    f"(balanced accuracy {threshold.achieved_balanced_accuracy:.3f} on "
    f"{threshold.tuned_on})"
)

# A degenerate corner: a scorer outage imputes 0.0 for the failed pair
# rather than aborting, which errs toward more groups.
broken = SimilarityMatrix(
    question_id="q-demo",
    answer_ids=("x", "y"),
    scores=np.array([[1.0, 0.0], [0.0, 1.0]]),
    imputed_pairs=(("x", "y"),),
)
print(f"imputed pairs are tracked for warnings: {broken.imputed_pairs}")
