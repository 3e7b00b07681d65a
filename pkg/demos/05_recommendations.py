#!/usr/bin/env python3
"""Top-k collaborator suggestions, with and without categorical filters.

    python3 demos/05_recommendations.py
"""

from collabrec import (
    CorpusIndex,
    NoCandidatesError,
    RecommendationFilters,
    RecommendationQuery,
    load_demo_profiles,
    recommend,
)
from collabrec.demo import DEMO_TARGET_ID, demo_embedding_provider

index = CorpusIndex(load_demo_profiles(), provider=demo_embedding_provider())
subject = index.by_id[DEMO_TARGET_ID]
print(f"subject: {subject.name} ({subject.domain}; wants {subject.collaboration_with})\n")

for method in ("tfidf", "embedding", "hybrid"):
    results = recommend(index, RecommendationQuery(DEMO_TARGET_ID, technique=method, k=3))
    print(f"top 3 by {method}:")
    for r in results:
        candidate = index.by_id[r.candidate_id]
        print(f"  {r.rank}. {candidate.name:20s} sim {r.similarity:.4f}  "
              f"cluster {r.cluster:3d}  {candidate.domain}")
    print()

# Filters are hard constraints applied before ranking.
filtered = recommend(
    index,
    RecommendationQuery(
        DEMO_TARGET_ID,
        k=3,
        filters=RecommendationFilters(profession="student"),
    ),
)
print("top 3 students only:")
for r in filtered:
    candidate = index.by_id[r.candidate_id]
    print(f"  {r.rank}. {candidate.name:20s} sim {r.similarity:.4f}  {candidate.profession}")

# Filtering everything away is its own error, distinct from low similarity.
try:
    recommend(
        index,
        RecommendationQuery(
            DEMO_TARGET_ID, filters=RecommendationFilters(profession="astronaut")
        ),
    )
except NoCandidatesError as exc:
    print(f"\nimpossible filter: {exc}")
