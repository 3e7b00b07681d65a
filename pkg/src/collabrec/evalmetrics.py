"""Ranking and clustering quality metrics, plus the relevance oracle.

Relevance ground truth is deliberately method-independent: a graded
Jaccard overlap of the two profiles' preprocessed domain+skill token
sets.  Grading by the evaluated scorer's own similarity would hand every
technique a perfect score, so the oracle must not depend on any of them.

Distance conventions: silhouette uses cosine distance (1 - similarity)
taken straight from the pairwise matrix; Davies-Bouldin needs centroids
and therefore works on the vectors themselves (callers normalize first),
with plain Euclidean distances.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import Profile, preprocess
from .simcluster import ClusterAssignment, SimilarityMatrix

logger = logging.getLogger(__name__)

DEFAULT_GRADE_THRESHOLDS = (0.6, 0.4, 0.2)


@dataclass(frozen=True)
class RelevanceJudgment:
    query_id: str
    candidate_id: str
    grade: int
    binary_relevant: bool

    def __post_init__(self):
        if self.grade not in (0, 1, 2, 3):
            raise ValueError("grade must be one of 0..3")
        if self.binary_relevant != (self.grade >= 1):
            raise ValueError("binary_relevant must mirror grade >= 1")


@dataclass(frozen=True)
class EvaluationRun:
    """One technique's ranked candidates and metric values over a query set."""

    queries: tuple[str, ...]
    per_query_rankings: Mapping[str, tuple[str, ...]]
    metrics: Mapping[str, float]

    def __post_init__(self):
        for query in self.queries:
            ranking = self.per_query_rankings.get(query, ())
            if query in ranking:
                raise ValueError(f"query {query!r} appears in its own ranking")
            if len(set(ranking)) != len(ranking):
                raise ValueError(f"ranking for {query!r} repeats candidates")


def jaccard(a: set, b: set) -> float:
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def grade_overlap(
    tokens_a: set, tokens_b: set, thresholds: Sequence[float] = DEFAULT_GRADE_THRESHOLDS
) -> int:
    """Map Jaccard overlap to a 0-3 grade via three descending thresholds."""
    t3, t2, t1 = thresholds
    if not t3 >= t2 >= t1:
        raise ValueError("thresholds must be descending")
    j = jaccard(tokens_a, tokens_b)
    if j >= t3:
        return 3
    if j >= t2:
        return 2
    if j >= t1:
        return 1
    return 0


def relevance_oracle(
    query: Profile,
    candidate: Profile,
    thresholds: Sequence[float] = DEFAULT_GRADE_THRESHOLDS,
    stopwords: frozenset[str] | set[str] = frozenset(),
) -> RelevanceJudgment:
    """Grade candidate against query by token-set overlap alone."""
    if query.id == candidate.id:
        raise ValueError("query must differ from candidate")
    grade = grade_overlap(
        set(preprocess(query, stopwords).tokens),
        set(preprocess(candidate, stopwords).tokens),
        thresholds,
    )
    return RelevanceJudgment(
        query_id=query.id,
        candidate_id=candidate.id,
        grade=grade,
        binary_relevant=grade >= 1,
    )


def dcg(grades: Sequence[int], depth: int) -> float:
    """Discounted cumulative gain: sum of (2^g - 1) / log2(k + 1) to depth."""
    total = 0.0
    for k, grade in enumerate(grades[:depth], start=1):
        total += (2.0**grade - 1.0) / math.log2(k + 1)
    return total


def ndcg_single(grades: Sequence[int], depth: int) -> float:
    """One query's NDCG; all-zero grades score 0 by convention."""
    if not grades:
        raise ValueError("empty ranking for a query")
    ideal = dcg(sorted(grades, reverse=True), depth)
    if ideal == 0.0:
        return 0.0
    return dcg(grades, depth) / ideal


def ndcg(rankings: Sequence[Sequence[int]], depth: int = 5) -> float:
    """Mean NDCG at ``depth`` over per-query ranked grade lists."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not rankings:
        raise ValueError("no queries to evaluate")
    return sum(ndcg_single(grades, depth) for grades in rankings) / len(rankings)


def average_precision(relevances: Sequence[bool]) -> float | None:
    """AP for one query over its full ranked candidate list.

    Returns None when the query has no relevant candidate at all, so the
    caller can exclude it from the outer mean.
    """
    m = sum(1 for r in relevances if r)
    if m == 0:
        return None
    total = 0.0
    hits = 0
    for k, rel in enumerate(relevances, start=1):
        if rel:
            hits += 1
            total += hits / k
    return total / m


def mean_average_precision(rankings: Sequence[Sequence[bool]]) -> float:
    """Mean AP over queries; zero-relevant queries are excluded and logged."""
    if not rankings:
        raise ValueError("no queries to evaluate")
    values = []
    skipped = 0
    for relevances in rankings:
        ap = average_precision(relevances)
        if ap is None:
            skipped += 1
        else:
            values.append(ap)
    if not values:
        raise ValueError("every query has zero relevant candidates; mAP undefined")
    if skipped:
        logger.info("mAP excluded %d quer%s with no relevant candidates",
                    skipped, "y" if skipped == 1 else "ies")
    return sum(values) / len(values)


def _labels_of(assignment) -> list[int]:
    if isinstance(assignment, ClusterAssignment):
        return list(assignment.labels)
    return list(assignment)


def _clusters(labels: Sequence[int]) -> list[list[int]]:
    by_label: dict[int, list[int]] = {}
    for i, label in enumerate(labels):
        by_label.setdefault(label, []).append(i)
    return [by_label[k] for k in sorted(by_label)]


def intra_cluster_similarity(sim: SimilarityMatrix, assignment) -> float:
    """Macro-average over clusters of the mean pairwise member similarity.

    Singleton clusters carry no pairs and are skipped; if every cluster
    is a singleton the metric is undefined.
    """
    labels = _labels_of(assignment)
    if len(labels) != sim.n:
        raise ValueError("assignment does not match similarity matrix size")
    cluster_means = []
    for members in _clusters(labels):
        if len(members) < 2:
            continue
        pair_sims = [
            sim.values[a, b]
            for idx, a in enumerate(members)
            for b in members[idx + 1:]
        ]
        cluster_means.append(float(np.mean(pair_sims)))
    if not cluster_means:
        raise ValueError("every cluster is a singleton; intra-cluster similarity undefined")
    return float(np.mean(cluster_means))


def silhouette(sim: SimilarityMatrix, assignment) -> float:
    """Mean silhouette over all points with distance = 1 - similarity."""
    labels = _labels_of(assignment)
    if len(labels) != sim.n:
        raise ValueError("assignment does not match similarity matrix size")
    clusters = _clusters(labels)
    if len(clusters) < 2:
        raise ValueError("silhouette needs at least two clusters")
    distance = 1.0 - sim.values
    members_of = {labels[i]: members for members in clusters for i in members}
    scores = []
    for i in range(sim.n):
        own = [j for j in members_of[labels[i]] if j != i]
        if not own:
            scores.append(0.0)  # singleton convention
            continue
        a = float(np.mean([distance[i, j] for j in own]))
        b = min(
            float(np.mean([distance[i, j] for j in members]))
            for members in clusters
            if labels[members[0]] != labels[i]
        )
        denom = max(a, b)
        scores.append(0.0 if denom == 0.0 else (b - a) / denom)
    return float(np.mean(scores))


def davies_bouldin(vectors: Sequence, assignment) -> float:
    """DB index: mean over clusters of the worst scatter-to-separation ratio.

    Operates on the vectors exactly as given (the pipeline passes
    L2-normalized ones) with Euclidean geometry throughout.
    """
    from .simcluster import dense_array

    labels = _labels_of(assignment)
    X = np.stack([dense_array(v) for v in vectors])
    if len(labels) != X.shape[0]:
        raise ValueError("assignment does not match vector count")
    clusters = _clusters(labels)
    if len(clusters) < 2:
        raise ValueError("Davies-Bouldin needs at least two clusters")
    centroids = np.stack([X[members].mean(axis=0) for members in clusters])
    scatter = np.array(
        [
            float(np.mean(np.linalg.norm(X[members] - centroids[c], axis=1)))
            for c, members in enumerate(clusters)
        ]
    )
    k = len(clusters)
    ratios = np.zeros(k)
    for i in range(k):
        worst = 0.0
        for j in range(k):
            if j == i:
                continue
            separation = float(np.linalg.norm(centroids[i] - centroids[j]))
            if separation == 0.0:
                raise ValueError(
                    f"clusters {i} and {j} have coincident centroids; DB undefined"
                )
            worst = max(worst, (scatter[i] + scatter[j]) / separation)
        ratios[i] = worst
    return float(np.mean(ratios))
