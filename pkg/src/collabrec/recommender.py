"""Top-k profile recommendation with categorical filtering.

Filters are hard constraints applied before ranking: a profession or
interest filter is an exact case-insensitive match on the candidate's
field, and a collaboration filter matches the candidate's profession
against the wanted collaborator kind.  Ties in similarity break by
profile id so results are stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import CorpusIndex


class UnknownTargetError(LookupError):
    pass


class NoCandidatesError(ValueError):
    """All candidates were filtered out (distinct from low similarity)."""


@dataclass(frozen=True)
class RecommendationFilters:
    profession: str | None = None
    interest: str | None = None
    collaboration_with: str | None = None

    def admits(self, candidate) -> bool:
        if self.profession is not None and candidate.profession.lower() != self.profession.lower():
            return False
        if self.interest is not None and candidate.interest.lower() != self.interest.lower():
            return False
        if (
            self.collaboration_with is not None
            and candidate.profession.lower() != self.collaboration_with.lower()
        ):
            return False
        return True


@dataclass(frozen=True)
class RecommendationQuery:
    target_id: str
    technique: str = "hybrid"
    k: int = 5
    filters: RecommendationFilters = field(default_factory=RecommendationFilters)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass(frozen=True)
class Recommendation:
    candidate_id: str
    similarity: float
    cluster: int
    rank: int


def recommend(
    index: CorpusIndex,
    query: RecommendationQuery,
    apply_filters: bool = True,
    exclude_ids: frozenset[str] = frozenset(),
) -> list[Recommendation]:
    """Rank all eligible candidates by similarity to the target, keep top k.

    ``exclude_ids`` is for callers such as the matching service that drop
    already-swiped profiles; library callers normally leave it empty.
    """
    if query.target_id not in index.by_id:
        raise UnknownTargetError(f"unknown target profile {query.target_id!r}")
    sim = index.sim(query.technique)
    dense_labels = index.assignment(query.technique).dense_labels()
    target_pos = index.index_of(query.target_id)

    candidates = []
    for pos, profile in enumerate(index.profiles):
        if profile.id == query.target_id or profile.id in exclude_ids:
            continue
        if apply_filters and not query.filters.admits(profile):
            continue
        candidates.append((float(sim.values[target_pos, pos]), profile.id, pos))
    if not candidates:
        raise NoCandidatesError(
            f"no candidates remain for target {query.target_id!r} after filtering"
        )

    candidates.sort(key=lambda item: (-item[0], item[1]))
    return [
        Recommendation(
            candidate_id=pid,
            similarity=similarity,
            cluster=dense_labels[pos],
            rank=rank,
        )
        for rank, (similarity, pid, pos) in enumerate(candidates[: query.k], start=1)
    ]
