"""Deterministic modularity clustering over dense weight matrices.

The core is classic Louvain: greedy local moving plus graph aggregation,
repeated level by level. Greedy moving alone gets stuck in poor local
optima on small graphs, so two deterministic quality measures are layered
on top:

  * multi-start over a fixed family of node visit orders (identity,
    reverse, and orders derived from a cryptographic hash, so there is no
    random number generator anywhere), keeping the best partition;
  * a polish phase that alternates local moving with exhaustive
    re-partitioning of single communities, connected community pairs, and
    connected community triples under strict size caps, applied only on
    strict modularity improvement and iterated to a fixpoint.

Matrix conventions: the graph is a symmetric nonnegative matrix W.
Off-diagonal entries are edge weights; diagonal entries carry ordered-pair
self weight (zero for input graphs, nonzero on aggregated levels). Degrees
are row sums and 2m is the total matrix sum, which keeps modularity exactly
preserved across aggregation levels.

Identical inputs give identical partitions on any machine: nodes are
visited in fixed orders, candidate communities ascend by label, and ties
keep the earliest candidate.
"""

from __future__ import annotations

import hashlib
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

_MIN_GAIN = 1e-12
_SPLIT_CAP = 12   # exhaustive bipartition bound (community or pair union)
_TRIPLE_CAP = 8   # exhaustive three-way repartition bound (triple union)
_HASH_STARTS = 6


def modularity(
    weights: np.ndarray, communities: Iterable[Sequence[int]], resolution: float = 1.0
) -> float:
    """Weighted modularity of a partition; 0.0 for an edgeless graph."""
    w = np.asarray(weights, dtype=float)
    m2 = w.sum()
    if m2 <= 0:
        return 0.0
    degrees = w.sum(axis=1)
    q = 0.0
    for members in communities:
        idx = np.asarray(list(members), dtype=int)
        q += w[np.ix_(idx, idx)].sum() / m2 - resolution * (degrees[idx].sum() / m2) ** 2
    return float(q)


def _compact(labels: np.ndarray) -> np.ndarray:
    remap: dict[int, int] = {}
    out = np.empty(len(labels), dtype=int)
    for i, raw in enumerate(labels):
        label = int(raw)
        if label not in remap:
            remap[label] = len(remap)
        out[i] = remap[label]
    return out


def _one_level(
    w: np.ndarray,
    resolution: float,
    order: Sequence[int],
    init: np.ndarray | None = None,
) -> np.ndarray:
    """Local moving sweeps until no node improves; returns compact labels."""
    n = w.shape[0]
    labels = np.arange(n) if init is None else _compact(init)
    degrees = w.sum(axis=1)
    m2 = w.sum()
    sigma_tot = [0.0] * (int(labels.max()) + 1)
    for node in range(n):
        sigma_tot[labels[node]] += degrees[node]
    next_label = len(sigma_tot)

    moved = True
    while moved:
        moved = False
        for node in order:
            current = int(labels[node])
            k = degrees[node]
            sigma_tot[current] -= k

            link_weights: dict[int, float] = {}
            row = w[node]
            for other in np.nonzero(row)[0]:
                if other == node:
                    continue
                label = int(labels[other])
                link_weights[label] = link_weights.get(label, 0.0) + row[other]

            def gain(label: int) -> float:
                return link_weights.get(label, 0.0) - resolution * k * sigma_tot[label] / m2

            best_label = current
            best_gain = gain(current)
            if 0.0 > best_gain + _MIN_GAIN:
                best_label = -1  # become a fresh singleton
                best_gain = 0.0
            for label in sorted(link_weights):
                if label == current:
                    continue
                g = gain(label)
                if g > best_gain + _MIN_GAIN:
                    best_label = label
                    best_gain = g

            if best_label == -1:
                best_label = next_label
                sigma_tot.append(0.0)
                next_label += 1
            sigma_tot[best_label] += k
            if best_label != current:
                labels[node] = best_label
                moved = True
    return _compact(labels)


def _aggregate(w: np.ndarray, labels: np.ndarray) -> np.ndarray:
    n_communities = int(labels.max()) + 1
    onehot = np.zeros((w.shape[0], n_communities))
    onehot[np.arange(w.shape[0]), labels] = 1.0
    return onehot.T @ w @ onehot


def _hierarchy(w: np.ndarray, resolution: float, order: Sequence[int]) -> np.ndarray:
    partition = np.arange(w.shape[0])
    level = w
    current_order: Sequence[int] = order
    while True:
        labels = _one_level(level, resolution, current_order)
        if int(labels.max()) + 1 == level.shape[0]:
            break
        partition = labels[partition]
        level = _aggregate(level, labels)
        current_order = range(level.shape[0])
    return _compact(partition)


def _partial_quality(
    sub: np.ndarray, ksub: np.ndarray, m2: float, resolution: float, parts: Sequence[np.ndarray]
) -> float:
    """Modularity contribution of one node set under a local sub-partition."""
    q = 0.0
    for mask in parts:
        if not mask.any():
            continue
        q += sub[np.ix_(mask, mask)].sum() / m2 - resolution * (ksub[mask].sum() / m2) ** 2
    return q


def _best_bipartition(
    sub: np.ndarray, ksub: np.ndarray, m2: float, resolution: float, baseline: float
) -> tuple[np.ndarray | None, float]:
    """Best two-way split of the node set, against a baseline quality."""
    s = sub.shape[0]
    best_mask = None
    best_q = baseline
    whole = _partial_quality(sub, ksub, m2, resolution, [np.ones(s, dtype=bool)])
    if whole > best_q + _MIN_GAIN:
        best_q = whole
        best_mask = np.zeros(s, dtype=bool)
    for r in range(1, s // 2 + 1):
        for chosen in combinations(range(s), r):
            mask = np.zeros(s, dtype=bool)
            mask[list(chosen)] = True
            if 2 * r == s and not mask[0]:
                continue  # mirror of an already-seen split
            q = _partial_quality(sub, ksub, m2, resolution, [mask, ~mask])
            if q > best_q + _MIN_GAIN:
                best_q = q
                best_mask = mask.copy()
    return best_mask, best_q


def _best_tripartition(
    sub: np.ndarray, ksub: np.ndarray, m2: float, resolution: float, baseline: float
) -> tuple[np.ndarray | None, float]:
    """Best assignment of the node set into at most three parts."""
    s = sub.shape[0]
    best_assign = None
    best_q = baseline
    for tail in product(range(3), repeat=s - 1):
        assign = np.array((0,) + tail)
        parts = [assign == part for part in range(3)]
        q = _partial_quality(sub, ksub, m2, resolution, parts)
        if q > best_q + _MIN_GAIN:
            best_q = q
            best_assign = assign.copy()
    return best_assign, best_q


def _communities_of(partition: np.ndarray) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for node, label in enumerate(partition):
        groups.setdefault(int(label), []).append(node)
    return sorted(groups.values(), key=lambda members: members[0])


def _connected(w: np.ndarray, members_a: Sequence[int], members_b: Sequence[int]) -> bool:
    return bool(w[np.ix_(members_a, members_b)].any())


def _polish(w: np.ndarray, partition: np.ndarray, resolution: float) -> np.ndarray:
    """Alternate local moving with capped exhaustive re-partitioning of
    communities, connected pairs, and connected triples until nothing
    strictly improves. Every applied change raises modularity, so the loop
    terminates."""
    m2 = w.sum()
    degrees = w.sum(axis=1)
    partition = _compact(partition)
    n = w.shape[0]

    def local_quality(members: Sequence[int], labels: np.ndarray) -> float:
        idx = np.asarray(members, dtype=int)
        sub = w[np.ix_(idx, idx)]
        ksub = degrees[idx]
        local = _compact(labels)
        parts = [local == part for part in range(int(local.max()) + 1)]
        return _partial_quality(sub, ksub, m2, resolution, parts)

    while True:
        changed = False

        moved = _one_level(w, resolution, range(n), init=partition)
        if not np.array_equal(moved, partition):
            changed = True
            partition = moved

        communities = _communities_of(partition)

        # Single-community splits.
        next_label = int(partition.max()) + 1
        for members in communities:
            s = len(members)
            if s < 2 or s > _SPLIT_CAP:
                continue
            idx = np.asarray(members, dtype=int)
            sub = w[np.ix_(idx, idx)]
            ksub = degrees[idx]
            baseline = _partial_quality(sub, ksub, m2, resolution, [np.ones(s, dtype=bool)])
            mask, _ = _best_bipartition(sub, ksub, m2, resolution, baseline)
            if mask is not None and mask.any():
                for position, node in enumerate(members):
                    if mask[position]:
                        partition[node] = next_label
                next_label += 1
                changed = True
        if changed:
            partition = _compact(partition)
            continue

        # Connected pair unions: merge or exchange members.
        communities = _communities_of(partition)
        applied = False
        for a, b in combinations(range(len(communities)), 2):
            union = sorted(communities[a] + communities[b])
            if len(union) > _SPLIT_CAP or not _connected(w, communities[a], communities[b]):
                continue
            idx = np.asarray(union, dtype=int)
            sub = w[np.ix_(idx, idx)]
            ksub = degrees[idx]
            in_a = np.array([node in set(communities[a]) for node in union])
            baseline = _partial_quality(sub, ksub, m2, resolution, [in_a, ~in_a])
            mask, _ = _best_bipartition(sub, ksub, m2, resolution, baseline)
            if mask is not None:
                base = int(partition.max()) + 1
                for position, node in enumerate(union):
                    partition[node] = base + int(mask[position])
                partition = _compact(partition)
                applied = changed = True
                break
        if applied:
            continue

        # Connected triple unions: up to three-way re-partitions.
        communities = _communities_of(partition)
        for a, b, c in combinations(range(len(communities)), 3):
            union = sorted(communities[a] + communities[b] + communities[c])
            if len(union) > _TRIPLE_CAP:
                continue
            links = (
                int(_connected(w, communities[a], communities[b]))
                + int(_connected(w, communities[a], communities[c]))
                + int(_connected(w, communities[b], communities[c]))
            )
            if links < 2:
                continue
            current = np.array(
                [
                    0 if node in set(communities[a]) else 1 if node in set(communities[b]) else 2
                    for node in union
                ]
            )
            baseline = local_quality(union, current)
            idx = np.asarray(union, dtype=int)
            sub = w[np.ix_(idx, idx)]
            ksub = degrees[idx]
            assign, _ = _best_tripartition(sub, ksub, m2, resolution, baseline)
            if assign is not None:
                base = int(partition.max()) + 1
                for position, node in enumerate(union):
                    partition[node] = base + int(assign[position])
                partition = _compact(partition)
                changed = True
                break

        if not changed:
            return partition


def _start_orders(n: int) -> list[list[int]]:
    orders = [list(range(n)), list(range(n))[::-1]]
    for salt in range(_HASH_STARTS):
        orders.append(
            sorted(
                range(n),
                key=lambda node: hashlib.sha256(f"{salt}:{node}".encode("utf-8")).digest(),
            )
        )
    return orders


def louvain_communities(weights: np.ndarray, resolution: float = 1.0) -> list[list[int]]:
    """Partition node indices by modularity; see the module docstring.

    Isolated nodes come back as singletons; communities are ordered by their
    smallest member and members ascend within each community.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weights must be a square matrix")
    n = w.shape[0]
    if n == 0:
        return []
    if w.sum() <= 0:
        return [[i] for i in range(n)]

    best_partition: np.ndarray | None = None
    best_q = -np.inf
    for order in _start_orders(n):
        partition = _polish(w, _hierarchy(w, resolution, order), resolution)
        q = modularity(w, _communities_of(partition), resolution)
        if q > best_q + _MIN_GAIN:
            best_q = q
            best_partition = partition
    assert best_partition is not None
    return _communities_of(best_partition)
