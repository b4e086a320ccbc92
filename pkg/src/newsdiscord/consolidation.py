"""Turn a question's answers plus pairwise scores into semantic answer groups.

The flow is: score all answer pairs (both directions, symmetrized by mean),
threshold the resulting unit-scale similarity matrix into a weighted graph,
and run deterministic Louvain clustering. Also holds threshold tuning on
labeled pairs and aggregation of multi-annotator groupings into global
groups via majority voting plus clustering.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    InputError,
    MalformedOutput,
    MismatchedAnswerSets,
    OneClassOnly,
    ParseError,
    ProviderUnavailable,
)
from .louvain import louvain_communities
from .providers.base import Answer, CandidateQuestion, PairScorer

logger = logging.getLogger(__name__)

INVALID_GROUP_LABEL = "-1"
DEFAULT_TAU = 0.5
DEFAULT_RESOLUTION = 1.0


class GroupingMethod(str, Enum):
    LOUVAIN = "louvain"
    ANNOTATED = "annotated"
    AGGREGATED = "aggregated"


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric unit-scale scores over an ordered answer id list."""

    question_id: str
    answer_ids: tuple[str, ...]
    scores: np.ndarray
    imputed_pairs: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        n = len(self.answer_ids)
        if self.scores.shape != (n, n):
            raise InputError("similarity matrix shape does not match answer ids")
        self.scores.setflags(write=False)

    def value(self, id_a: str, id_b: str) -> float:
        i = self.answer_ids.index(id_a)
        j = self.answer_ids.index(id_b)
        return float(self.scores[i, j])


@dataclass(frozen=True)
class AnswerGroup:
    member_ids: tuple[str, ...]
    representative_id: str
    label: str | None = None

    def __post_init__(self) -> None:
        if not self.member_ids:
            raise InputError("answer group has no members")
        if self.representative_id not in self.member_ids:
            raise InputError("representative is not a group member")

    @property
    def size(self) -> int:
        return len(self.member_ids)


@dataclass(frozen=True)
class Grouping:
    """A partition of a question's answer ids into semantic groups."""

    question_id: str
    groups: tuple[AnswerGroup, ...]
    method: GroupingMethod

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for group in self.groups:
            for member in group.member_ids:
                if member in seen:
                    raise InputError(f"answer {member!r} appears in two groups")
                seen.add(member)

    def answer_ids(self) -> tuple[str, ...]:
        return tuple(sorted(m for g in self.groups for m in g.member_ids))

    def group_of(self, answer_id: str) -> AnswerGroup:
        for group in self.groups:
            if answer_id in group.member_ids:
                return group
        raise KeyError(answer_id)

    @property
    def largest_group_size(self) -> int:
        return max((g.size for g in self.groups), default=0)


@dataclass(frozen=True)
class Threshold:
    tau: float
    tuned_on: str = ""
    achieved_balanced_accuracy: float = float("nan")


@dataclass(frozen=True)
class LabeledPair:
    """An unordered answer pair with a binary same-group gold label."""

    question_id: str
    answer_a: str
    answer_b: str
    gold: int
    score: float | None = None
    target: float | None = None

    def __post_init__(self) -> None:
        if self.answer_a == self.answer_b:
            raise InputError("a labeled pair needs two distinct answers")
        if self.gold not in (0, 1):
            raise InputError(f"gold label must be 0 or 1, got {self.gold!r}")
        if self.answer_a > self.answer_b:
            a, b = self.answer_b, self.answer_a
            object.__setattr__(self, "answer_a", a)
            object.__setattr__(self, "answer_b", b)


def _as_tau(tau: float | Threshold) -> float:
    return tau.tau if isinstance(tau, Threshold) else float(tau)


def build_similarity_matrix(
    question: str | CandidateQuestion,
    answers: Sequence[Answer],
    scorer: PairScorer,
) -> SimilarityMatrix:
    """Score every answer pair in both directions and symmetrize by mean.

    A scorer failure on a pair imputes 0.0 for that entry (conservative:
    no edge) and records the pair so callers can surface a warning.
    """
    if not answers:
        raise InputError("cannot build a similarity matrix without answers")
    question_text = question.text if isinstance(question, CandidateQuestion) else question
    ids = tuple(a.id for a in answers)
    if len(set(ids)) != len(ids):
        raise InputError("duplicate answer ids in similarity matrix input")
    question_id = answers[0].question_id

    n = len(answers)
    scores = np.eye(n)
    imputed: list[tuple[str, str]] = []
    for i in range(n):
        for j in range(i + 1, n):
            try:
                forward = scorer.score_pair(question_text, answers[i].text, answers[j].text).unit()
                backward = scorer.score_pair(question_text, answers[j].text, answers[i].text).unit()
                value = (forward + backward) / 2.0
            except (ProviderUnavailable, MalformedOutput) as exc:
                logger.warning("scorer failed on pair (%s, %s): %s", ids[i], ids[j], exc)
                imputed.append((ids[i], ids[j]))
                value = 0.0
            scores[i, j] = scores[j, i] = value
    return SimilarityMatrix(
        question_id=question_id,
        answer_ids=ids,
        scores=scores,
        imputed_pairs=tuple(imputed),
    )


def select_representative(
    member_ids: Sequence[str],
    matrix: SimilarityMatrix,
    texts: Mapping[str, str] | None = None,
) -> str:
    """The group medoid: the member with the highest mean similarity to the
    rest, ties broken by longest answer text, then smallest id."""
    members = list(member_ids)
    if not members:
        raise InputError("cannot pick a representative from an empty group")
    if len(members) == 1:
        return members[0]
    texts = texts or {}
    index = {aid: i for i, aid in enumerate(matrix.answer_ids)}
    rows = [index[m] for m in members]

    def mean_similarity(member: str) -> float:
        i = index[member]
        others = [r for r in rows if r != i]
        return float(matrix.scores[i, others].mean())

    ranked = sorted(
        members,
        key=lambda m: (-mean_similarity(m), -len(texts.get(m, "")), m),
    )
    return ranked[0]


def _sorted_groups(groups: list[AnswerGroup]) -> tuple[AnswerGroup, ...]:
    return tuple(sorted(groups, key=lambda g: (-g.size, min(g.member_ids))))


def louvain_cluster(
    matrix: SimilarityMatrix,
    tau: float | Threshold,
    resolution: float = DEFAULT_RESOLUTION,
    texts: Mapping[str, str] | None = None,
) -> Grouping:
    """Cluster the thresholded similarity graph into answer groups.

    The graph keeps an edge (weighted by its score) wherever the score
    reaches tau; isolated answers become singleton groups. Output groups are
    ordered by size (descending), then smallest member id.
    """
    cut = _as_tau(tau)
    n = len(matrix.answer_ids)
    adjacency = np.where(matrix.scores >= cut, matrix.scores, 0.0)
    np.fill_diagonal(adjacency, 0.0)
    communities = louvain_communities(adjacency, resolution=resolution)
    groups = []
    for members in communities:
        ids = tuple(sorted(matrix.answer_ids[i] for i in members))
        groups.append(
            AnswerGroup(
                member_ids=ids,
                representative_id=select_representative(ids, matrix, texts),
            )
        )
    return Grouping(
        question_id=matrix.question_id,
        groups=_sorted_groups(groups),
        method=GroupingMethod.LOUVAIN,
    )


def consolidate(
    question: str | CandidateQuestion,
    answers: Sequence[Answer],
    scorer: PairScorer,
    tau: float | Threshold = DEFAULT_TAU,
    resolution: float = DEFAULT_RESOLUTION,
) -> Grouping:
    """Full consolidation: pairwise scoring, clustering, representatives."""
    if not answers:
        question_id = question.id if isinstance(question, CandidateQuestion) else ""
        return Grouping(question_id=question_id, groups=(), method=GroupingMethod.LOUVAIN)
    matrix = build_similarity_matrix(question, answers, scorer)
    texts = {a.id: a.text for a in answers}
    return louvain_cluster(matrix, tau, resolution=resolution, texts=texts)


def select_threshold(pairs: Sequence[LabeledPair], dataset_id: str = "") -> Threshold:
    """Exhaustive sweep over midpoints of consecutive distinct scores,
    maximizing balanced accuracy; ties resolve to the smallest tau."""
    if not pairs:
        raise InputError("cannot tune a threshold without pairs")
    if any(p.score is None for p in pairs):
        raise InputError("all pairs need raw scores for threshold tuning")
    golds = np.array([p.gold for p in pairs], dtype=bool)
    scores = np.array([p.score for p in pairs], dtype=float)
    if golds.all() or (~golds).all():
        raise OneClassOnly("threshold tuning needs both gold classes")

    distinct = np.unique(scores)
    if len(distinct) == 1:
        candidates = [float(distinct[0])]
    else:
        candidates = [float((a + b) / 2.0) for a, b in zip(distinct[:-1], distinct[1:])]

    best_tau = candidates[0]
    best_ba = -1.0
    n_pos = int(golds.sum())
    n_neg = int((~golds).sum())
    for tau in candidates:
        preds = scores >= tau
        tpr = int((preds & golds).sum()) / n_pos
        tnr = int((~preds & ~golds).sum()) / n_neg
        ba = (tpr + tnr) / 2.0
        if ba > best_ba:
            best_ba = ba
            best_tau = tau
    return Threshold(tau=best_tau, tuned_on=dataset_id, achieved_balanced_accuracy=best_ba)


def _valid_ids(grouping: Grouping) -> set[str]:
    return {
        m
        for g in grouping.groups
        if g.label != INVALID_GROUP_LABEL
        for m in g.member_ids
    }


def _group_index(grouping: Grouping) -> dict[str, int]:
    out: dict[str, int] = {}
    for idx, group in enumerate(grouping.groups):
        if group.label == INVALID_GROUP_LABEL:
            continue
        for member in group.member_ids:
            out[member] = idx
    return out


def aggregate_annotations(groupings: Sequence[Grouping]) -> Grouping:
    """Combine annotator groupings into global groups.

    Answers an annotator marked invalid (the sentinel "-1" group) are removed
    from that annotator's votes. An edge joins two answers when a strict
    majority of the annotators who rated both of them valid co-grouped them;
    clustering the resulting graph yields the global grouping. Answers every
    annotator invalidated are dropped.
    """
    if len(groupings) < 2:
        raise InputError("aggregation needs at least two annotator groupings")
    universes = [set(g.answer_ids()) for g in groupings]
    if any(u != universes[0] for u in universes[1:]):
        raise MismatchedAnswerSets("annotator groupings cover different answer sets")

    memberships = [_group_index(g) for g in groupings]
    nodes = sorted(set().union(*(_valid_ids(g) for g in groupings)))
    index = {aid: i for i, aid in enumerate(nodes)}

    adjacency = np.zeros((len(nodes), len(nodes)))
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            j = index[b]
            raters = [m for m in memberships if a in m and b in m]
            if not raters:
                continue
            together = sum(1 for m in raters if m[a] == m[b])
            if together * 2 > len(raters):
                adjacency[i, j] = adjacency[j, i] = 1.0

    communities = louvain_communities(adjacency)
    groups = []
    for members in communities:
        ids = tuple(sorted(nodes[i] for i in members))
        groups.append(AnswerGroup(member_ids=ids, representative_id=min(ids)))
    question_id = groupings[0].question_id
    return Grouping(
        question_id=question_id,
        groups=_sorted_groups(groups),
        method=GroupingMethod.AGGREGATED,
    )


def restrict_grouping(grouping: Grouping, ids: set[str]) -> Grouping:
    """Drop members outside ids; empty groups disappear."""
    groups = []
    for group in grouping.groups:
        members = tuple(sorted(m for m in group.member_ids if m in ids))
        if not members:
            continue
        representative = (
            group.representative_id if group.representative_id in members else min(members)
        )
        groups.append(
            AnswerGroup(member_ids=members, representative_id=representative, label=group.label)
        )
    return Grouping(question_id=grouping.question_id, groups=tuple(groups), method=grouping.method)


@dataclass(frozen=True)
class AnnotatedQuestion:
    """One question from an annotation file: answers plus per-annotator groupings."""

    question_id: str
    question_text: str
    answer_ids: tuple[str, ...]
    answer_texts: Mapping[str, str]
    annotator_groupings: tuple[Grouping, ...] = field(default=())


def _grouping_from_labels(
    question_id: str, answer_ids: Sequence[str], labels: Sequence[int]
) -> Grouping:
    if len(labels) != len(answer_ids):
        raise ParseError(
            f"question {question_id!r}: {len(labels)} labels for {len(answer_ids)} answers"
        )
    by_label: dict[int, list[str]] = {}
    for aid, label in zip(answer_ids, labels):
        by_label.setdefault(int(label), []).append(aid)
    groups = []
    for label in sorted(by_label):
        ids = tuple(sorted(by_label[label]))
        groups.append(
            AnswerGroup(member_ids=ids, representative_id=min(ids), label=str(label))
        )
    return Grouping(
        question_id=question_id,
        groups=tuple(groups),
        method=GroupingMethod.ANNOTATED,
    )


def load_annotation_file(path: str | Path) -> list[AnnotatedQuestion]:
    """Read the evaluation annotation format.

    JSON shape: {"questions": [{"question_id", "question", "answers":
    [{"id", "text"}], "annotations": [[int, ...], ...]}]}. Group labels are
    arbitrary integers; -1 marks an answer the annotator judged invalid.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read annotation file {path}: {exc}") from exc
    questions = []
    for entry in payload.get("questions", []):
        question_id = str(entry.get("question_id") or "")
        if not question_id:
            raise ParseError(f"annotation entry in {path} is missing question_id")
        answers = entry.get("answers") or []
        answer_ids = tuple(str(a["id"]) for a in answers)
        if len(set(answer_ids)) != len(answer_ids):
            raise ParseError(f"question {question_id!r} has duplicate answer ids")
        texts = {str(a["id"]): str(a.get("text", "")) for a in answers}
        groupings = tuple(
            _grouping_from_labels(question_id, answer_ids, labels)
            for labels in entry.get("annotations") or []
        )
        questions.append(
            AnnotatedQuestion(
                question_id=question_id,
                question_text=str(entry.get("question", "")),
                answer_ids=answer_ids,
                answer_texts=texts,
                annotator_groupings=groupings,
            )
        )
    return questions


def load_pair_file(path: str | Path) -> list[LabeledPair]:
    """Read a pair-scores file: {"pairs": [{question_id, answer_a, answer_b,
    score, gold?, target?}]}."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read pair file {path}: {exc}") from exc
    pairs = []
    for entry in payload.get("pairs", []):
        try:
            pairs.append(
                LabeledPair(
                    question_id=str(entry.get("question_id", "")),
                    answer_a=str(entry["answer_a"]),
                    answer_b=str(entry["answer_b"]),
                    gold=int(entry.get("gold", 0)),
                    score=float(entry["score"]) if entry.get("score") is not None else None,
                    target=float(entry["target"]) if entry.get("target") is not None else None,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad pair entry in {path}: {entry!r}") from exc
    return pairs
