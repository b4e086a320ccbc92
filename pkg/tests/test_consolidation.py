import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newsdiscord.consolidation import (
    AnswerGroup,
    Grouping,
    GroupingMethod,
    LabeledPair,
    SimilarityMatrix,
    Threshold,
    aggregate_annotations,
    build_similarity_matrix,
    consolidate,
    load_annotation_file,
    load_pair_file,
    louvain_cluster,
    select_representative,
    select_threshold,
)
from newsdiscord.errors import (
    InputError,
    MismatchedAnswerSets,
    OneClassOnly,
    ProviderUnavailable,
)
from newsdiscord.providers import Answer, PairScore, Scale, TokenF1Scorer

from .conftest import clustered_answers


def answer(article, text, question_id="q-x"):
    return Answer(
        question_id=question_id,
        source_id=f"src-{article}",
        article_id=article,
        text=text,
        char_start=0,
        char_end=len(text),
        confidence=0.5,
    )


class StaticScorer:
    """Scores looked up from a dict keyed by (a, b) text pairs; directional."""

    identifier = "static"

    def __init__(self, table, scale=Scale.UNIT, fail_on=()):
        self.table = table
        self.scale = scale
        self.fail_on = set(fail_on)

    def score_pair(self, question, answer_a, answer_b):
        if (answer_a, answer_b) in self.fail_on or (answer_b, answer_a) in self.fail_on:
            raise ProviderUnavailable("scorer offline")
        return PairScore(score=self.table[(answer_a, answer_b)], scale=self.scale)


class TestBuildSimilarityMatrix:
    def test_single_answer_identity(self):
        matrix = build_similarity_matrix("q", [answer("a1", "alpha")], TokenF1Scorer())
        assert matrix.scores.shape == (1, 1)
        assert matrix.scores[0, 0] == 1.0

    def test_identical_and_disjoint_entries(self):
        answers = [answer("a1", "the vote passed"), answer("a2", "the vote passed"),
                   answer("a3", "gulls circled overhead")]
        matrix = build_similarity_matrix("q", answers, TokenF1Scorer())
        assert matrix.scores[0, 1] == 1.0
        assert matrix.scores[0, 2] == 0.0
        assert matrix.scores[1, 2] == 0.0
        assert np.allclose(matrix.scores, matrix.scores.T)
        assert np.all(np.diag(matrix.scores) == 1.0)

    def test_asymmetric_scorer_symmetrized_by_mean(self):
        table = {("textA", "textB"): 0.4, ("textB", "textA"): 0.6}
        matrix = build_similarity_matrix(
            "q", [answer("a1", "textA"), answer("a2", "textB")], StaticScorer(table)
        )
        assert matrix.scores[0, 1] == pytest.approx(0.5)
        assert matrix.scores[1, 0] == pytest.approx(0.5)

    def test_scorer_failure_imputes_zero_and_records_pair(self):
        table = {("textA", "textB"): 0.9, ("textB", "textA"): 0.9}
        scorer = StaticScorer(table, fail_on=[("textA", "textB")])
        answers = [answer("a1", "textA"), answer("a2", "textB")]
        matrix = build_similarity_matrix("q", answers, scorer)
        assert matrix.scores[0, 1] == 0.0
        assert matrix.imputed_pairs == ((answers[0].id, answers[1].id),)

    def test_mocha_scale_adapted_to_unit(self):
        table = {("textA", "textB"): 5.0, ("textB", "textA"): 5.0}
        matrix = build_similarity_matrix(
            "q", [answer("a1", "textA"), answer("a2", "textB")],
            StaticScorer(table, scale=Scale.MOCHA),
        )
        assert matrix.scores[0, 1] == 1.0


def matrix_from(scores, question_id="q-x", ids=None):
    scores = np.asarray(scores, dtype=float)
    ids = tuple(ids or (f"ans-{i}" for i in range(scores.shape[0])))
    return SimilarityMatrix(question_id=question_id, answer_ids=ids, scores=scores)


class TestLouvainCluster:
    def test_two_triangles_with_bridge(self):
        # expected grouping cross-checked by the exhaustive oracle in
        # test_louvain.py for the same topology
        scores = np.eye(6)
        for a, b in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]:
            scores[a, b] = scores[b, a] = 0.9
        grouping = louvain_cluster(matrix_from(scores), tau=0.5)
        assert [g.member_ids for g in grouping.groups] == [
            ("ans-0", "ans-1", "ans-2"),
            ("ans-3", "ans-4", "ans-5"),
        ]

    def test_all_below_tau_gives_singletons(self):
        scores = np.full((4, 4), 0.3)
        np.fill_diagonal(scores, 1.0)
        grouping = louvain_cluster(matrix_from(scores), tau=0.5)
        assert all(g.size == 1 for g in grouping.groups)
        assert len(grouping.groups) == 4

    def test_complete_uniform_graph_single_group(self):
        scores = np.full((5, 5), 0.8)
        np.fill_diagonal(scores, 1.0)
        grouping = louvain_cluster(matrix_from(scores), tau=0.5)
        assert len(grouping.groups) == 1
        assert grouping.groups[0].size == 5

    def test_edge_inclusive_at_tau(self):
        scores = np.eye(2)
        scores[0, 1] = scores[1, 0] = 0.5
        grouping = louvain_cluster(matrix_from(scores), tau=0.5)
        assert len(grouping.groups) == 1

    def test_groups_sorted_by_size_then_smallest_member(self):
        scores = np.eye(5)
        scores[3, 4] = scores[4, 3] = 0.9  # pair
        grouping = louvain_cluster(matrix_from(scores), tau=0.5)
        assert grouping.groups[0].member_ids == ("ans-3", "ans-4")
        assert [g.member_ids for g in grouping.groups[1:]] == [
            ("ans-0",), ("ans-1",), ("ans-2",)
        ]


class TestSelectRepresentative:
    def test_singleton(self):
        matrix = matrix_from(np.eye(1))
        assert select_representative(("ans-0",), matrix) == "ans-0"

    def test_medoid_dominates(self):
        scores = np.eye(3)
        scores[0, 1] = scores[1, 0] = 0.9
        scores[0, 2] = scores[2, 0] = 0.9
        scores[1, 2] = scores[2, 1] = 0.2
        matrix = matrix_from(scores)
        assert select_representative(("ans-0", "ans-1", "ans-2"), matrix) == "ans-0"

    def test_tie_broken_by_longest_text_then_id(self):
        scores = np.full((3, 3), 0.5)
        np.fill_diagonal(scores, 1.0)
        matrix = matrix_from(scores)
        texts = {"ans-0": "short", "ans-1": "the longest answer text", "ans-2": "medium one"}
        assert select_representative(matrix.answer_ids, matrix, texts) == "ans-1"
        assert select_representative(matrix.answer_ids, matrix) == "ans-0"


class TestConsolidate:
    def test_empty_answers_empty_grouping(self):
        grouping = consolidate("q text", [], TokenF1Scorer())
        assert grouping.groups == ()

    def test_large_fixture_partition_covers_every_id(self):
        answers, _ = clustered_answers()
        grouping = consolidate("q text", answers, TokenF1Scorer(), tau=0.5)
        assert sorted(grouping.answer_ids()) == sorted(a.id for a in answers)
        seen = [m for g in grouping.groups for m in g.member_ids]
        assert len(seen) == len(set(seen)) == 29

    def test_large_fixture_recovers_intended_clusters(self):
        answers, clusters = clustered_answers()
        grouping = consolidate("q text", answers, TokenF1Scorer(), tau=0.5)
        assert sorted(sorted(g.member_ids) for g in grouping.groups) == sorted(clusters)

    def test_permuted_answer_order_identical_grouping(self):
        answers, _ = clustered_answers()
        reference = consolidate("q text", answers, TokenF1Scorer(), tau=0.5)
        rng = random.Random(2024)
        for _ in range(20):
            shuffled = answers[:]
            rng.shuffle(shuffled)
            grouping = consolidate("q text", shuffled, TokenF1Scorer(), tau=0.5)
            assert [set(g.member_ids) for g in grouping.groups] == [
                set(g.member_ids) for g in reference.groups
            ]
            assert [g.representative_id for g in grouping.groups] == [
                g.representative_id for g in reference.groups
            ]


class TestThresholdSelection:
    def test_perfect_separation_midpoint(self):
        pairs = [
            LabeledPair("q", "a", "b", 1, score=0.8),
            LabeledPair("q", "a", "c", 1, score=0.9),
            LabeledPair("q", "b", "c", 0, score=0.1),
            LabeledPair("q", "b", "d", 0, score=0.2),
        ]
        threshold = select_threshold(pairs, dataset_id="valid")
        assert threshold.tau == pytest.approx(0.5)
        assert threshold.achieved_balanced_accuracy == 1.0
        assert threshold.tuned_on == "valid"

    def test_degenerate_identical_scores(self):
        pairs = [
            LabeledPair("q", "a", "b", 1, score=0.4),
            LabeledPair("q", "b", "c", 0, score=0.4),
        ]
        threshold = select_threshold(pairs)
        assert threshold.tau == 0.4
        assert threshold.achieved_balanced_accuracy == 0.5

    def test_one_class_only_raises(self):
        pairs = [LabeledPair("q", "a", "b", 1, score=0.4)]
        with pytest.raises(OneClassOnly):
            select_threshold(pairs)

    def _oracle(self, pairs):
        """Independent sweep: explicit counting per candidate midpoint."""
        scores = sorted({p.score for p in pairs})
        if len(scores) == 1:
            candidates = [scores[0]]
        else:
            candidates = [(a + b) / 2 for a, b in zip(scores, scores[1:])]
        best = None
        for tau in candidates:
            tp = sum(1 for p in pairs if p.gold == 1 and p.score >= tau)
            fn = sum(1 for p in pairs if p.gold == 1 and p.score < tau)
            tn = sum(1 for p in pairs if p.gold == 0 and p.score < tau)
            fp = sum(1 for p in pairs if p.gold == 0 and p.score >= tau)
            ba = (tp / (tp + fn) + tn / (tn + fp)) / 2
            if best is None or ba > best[1]:
                best = (tau, ba)
        return best

    def test_interleaved_fixture_matches_oracle(self):
        rng = random.Random(7)
        scores = [round(rng.random(), 3) for _ in range(10)]
        golds = [1, 0, 1, 1, 0, 0, 1, 0, 1, 0]
        pairs = [
            LabeledPair("q", f"a{i}", f"b{i}", g, score=s)
            for i, (g, s) in enumerate(zip(golds, scores))
        ]
        expected_tau, expected_ba = self._oracle(pairs)
        threshold = select_threshold(pairs)
        assert threshold.tau == pytest.approx(expected_tau)
        assert threshold.achieved_balanced_accuracy == pytest.approx(expected_ba)


def grouping_from(label_map, question_id="q-x", method=GroupingMethod.ANNOTATED):
    groups = {}
    for member, label in label_map.items():
        groups.setdefault(label, []).append(member)
    return Grouping(
        question_id=question_id,
        groups=tuple(
            AnswerGroup(
                member_ids=tuple(sorted(members)),
                representative_id=min(members),
                label=str(label),
            )
            for label, members in sorted(groups.items(), key=lambda kv: str(kv[0]))
        ),
        method=method,
    )


class TestAggregateAnnotations:
    def test_unanimous_annotations_returned(self):
        labels = {"a": 1, "b": 1, "c": 2, "d": 2}
        aggregated = aggregate_annotations([grouping_from(labels)] * 3)
        assert sorted(tuple(g.member_ids) for g in aggregated.groups) == [
            ("a", "b"), ("c", "d")
        ]
        assert aggregated.method is GroupingMethod.AGGREGATED

    def test_majority_two_of_three(self):
        together = grouping_from({"a": 1, "b": 1, "c": 2})
        split = grouping_from({"a": 1, "b": 2, "c": 3})
        aggregated = aggregate_annotations([together, together, split])
        assert ("a", "b") in [tuple(g.member_ids) for g in aggregated.groups]

    def test_invalid_marker_removed_but_majority_keeps_answer(self):
        # annotator 3 marks x invalid; the other two keep x grouped with y
        keep = grouping_from({"x": 1, "y": 1, "z": 2})
        drop = grouping_from({"x": -1, "y": 1, "z": 2})
        aggregated = aggregate_annotations([keep, keep, drop])
        assert ("x", "y") in [tuple(g.member_ids) for g in aggregated.groups]

    def test_all_invalid_answer_dropped(self):
        marked = grouping_from({"x": -1, "y": 1, "z": 1})
        aggregated = aggregate_annotations([marked, marked, marked])
        assert "x" not in aggregated.answer_ids()
        assert sorted(aggregated.answer_ids()) == ["y", "z"]

    def test_mismatched_answer_sets_rejected(self):
        g1 = grouping_from({"a": 1, "b": 1})
        g2 = grouping_from({"a": 1, "c": 1})
        with pytest.raises(MismatchedAnswerSets):
            aggregate_annotations([g1, g2])

    def test_needs_at_least_two(self):
        with pytest.raises(InputError):
            aggregate_annotations([grouping_from({"a": 1})])


class TestFileFormats:
    def test_annotation_round_trip(self, tmp_path):
        payload = {
            "questions": [
                {
                    "question_id": "q-1",
                    "question": "Why did the mill close?",
                    "answers": [
                        {"id": "a", "text": "gas prices"},
                        {"id": "b", "text": "fuel costs"},
                        {"id": "c", "text": "inspection failure"},
                    ],
                    "annotations": [[1, 1, 2], [1, 1, 3], [5, 5, -1]],
                }
            ]
        }
        path = tmp_path / "annotations.json"
        path.write_text(json.dumps(payload))
        questions = load_annotation_file(path)
        assert len(questions) == 1
        q = questions[0]
        assert q.answer_ids == ("a", "b", "c")
        assert len(q.annotator_groupings) == 3
        third = q.annotator_groupings[2]
        invalid = [g for g in third.groups if g.label == "-1"]
        assert invalid and invalid[0].member_ids == ("c",)

    def test_pair_file_round_trip(self, tmp_path):
        payload = {
            "pairs": [
                {"question_id": "q-1", "answer_a": "b", "answer_b": "a", "score": 0.7,
                 "gold": 1, "target": 4.5},
                {"question_id": "q-1", "answer_a": "a", "answer_b": "c", "score": 0.1,
                 "gold": 0},
            ]
        }
        path = tmp_path / "pairs.json"
        path.write_text(json.dumps(payload))
        pairs = load_pair_file(path)
        assert pairs[0].answer_a == "a" and pairs[0].answer_b == "b"  # canonical order
        assert pairs[0].target == 4.5
        assert pairs[1].score == 0.1


@st.composite
def unit_matrices(draw):
    n = draw(st.integers(min_value=1, max_value=7))
    values = draw(
        st.lists(
            st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
            min_size=n * n,
            max_size=n * n,
        )
    )
    scores = np.array(values).reshape(n, n)
    scores = (scores + scores.T) / 2
    np.fill_diagonal(scores, 1.0)
    return scores


@settings(max_examples=40, deadline=None)
@given(unit_matrices(), st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
def test_cluster_output_is_partition(scores, tau):
    matrix = matrix_from(scores)
    grouping = louvain_cluster(matrix, tau)
    members = [m for g in grouping.groups for m in g.member_ids]
    assert sorted(members) == sorted(matrix.answer_ids)
    for group in grouping.groups:
        assert group.representative_id in group.member_ids


def connected_components(adjacency):
    n = adjacency.shape[0]
    seen = set()
    components = []
    for start in range(n):
        if start in seen:
            continue
        stack, comp = [start], set()
        while stack:
            node = stack.pop()
            if node in comp:
                continue
            comp.add(node)
            stack.extend(int(j) for j in np.nonzero(adjacency[node])[0] if j not in comp)
        seen |= comp
        components.append(frozenset(comp))
    return components


@settings(max_examples=40, deadline=None)
@given(unit_matrices(), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_raising_tau_never_merges_components(scores, tau_a, tau_b):
    low, high = sorted((tau_a, tau_b))
    adjacency_low = np.where(scores >= low, scores, 0.0)
    adjacency_high = np.where(scores >= high, scores, 0.0)
    np.fill_diagonal(adjacency_low, 0.0)
    np.fill_diagonal(adjacency_high, 0.0)
    comps_low = connected_components(adjacency_low)
    for comp_high in connected_components(adjacency_high):
        assert any(comp_high <= comp_low for comp_low in comps_low)


def test_threshold_accepts_threshold_object():
    scores = np.eye(2)
    scores[0, 1] = scores[1, 0] = 0.6
    grouping = louvain_cluster(matrix_from(scores), Threshold(tau=0.5))
    assert len(grouping.groups) == 1
