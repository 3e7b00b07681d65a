#!/usr/bin/env python3
"""Vector representations and the hybrid similarity identity.

    python3 demos/02_vectors_and_similarity.py
"""

import random

from collabrec import CorpusIndex, load_demo_profiles
from collabrec.demo import DEMO_TARGET_ID, demo_embedding_provider

index = CorpusIndex(load_demo_profiles(), provider=demo_embedding_provider())
print(f"vocabulary: {len(index.vocabulary.term_to_index)} stemmed terms "
      f"over {index.vocabulary.n_documents} documents\n")

pos = index.index_of(DEMO_TARGET_ID)
subject = index.profiles[pos]
vec = index.tfidf_vectors[pos]
reverse = {i: t for t, i in index.vocabulary.term_to_index.items()}
print(f"heaviest tf-idf terms for {subject.name}:")
for term_index, weight in sorted(vec.entries, key=lambda e: -e[1])[:5]:
    print(f"  {reverse[term_index]:15s} {weight:.4f}")

embedding = index.embed_vectors[pos]
print(f"\ndense embedding: dimension {embedding.dimension}, norm {embedding.norm():.4f}")

# The hybrid vector concatenates the unit-normalized parts scaled by
# sqrt(alpha) and sqrt(1 - alpha), so its cosine is exactly the weighted
# mean of the two channel cosines.  Spot check a few random pairs.
hybrid = index.sim("hybrid").values
tfidf = index.sim("tfidf").values
embed = index.sim("embedding").values
rng = random.Random(7)
print("\npair                cos_tfidf  cos_embed  cos_hybrid  |identity gap|")
for _ in range(5):
    i, j = rng.randrange(len(index.profiles)), rng.randrange(len(index.profiles))
    if i == j:
        continue
    gap = abs(hybrid[i, j] - 0.5 * (tfidf[i, j] + embed[i, j]))
    print(f"({i:3d}, {j:3d})          {tfidf[i, j]:9.4f}  {embed[i, j]:9.4f}"
          f"  {hybrid[i, j]:10.4f}  {gap:.2e}")
