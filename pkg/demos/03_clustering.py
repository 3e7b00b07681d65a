#!/usr/bin/env python3
"""Affinity propagation over the demo corpus.

The cluster count is not a parameter; it emerges from the similarity
structure and the preference setting.

    python3 demos/03_clustering.py
"""

from collections import Counter

from collabrec import CorpusIndex, load_demo_profiles
from collabrec.demo import demo_embedding_provider

index = CorpusIndex(load_demo_profiles(), provider=demo_embedding_provider())

for method in ("tfidf", "embedding", "hybrid"):
    assignment = index.assignment(method)
    sizes = Counter(assignment.labels)
    largest = sizes.most_common(3)
    state = "converged" if assignment.converged else "hit the iteration cap"
    print(f"{method:10s} {assignment.n_clusters:3d} clusters after "
          f"{assignment.iterations_run} iterations ({state}); "
          f"largest: {[count for _, count in largest]}")

print("\nexemplar profiles of the three largest hybrid clusters:")
assignment = index.assignment("hybrid")
for exemplar, count in Counter(assignment.labels).most_common(3):
    profile = index.profiles[exemplar]
    print(f"  [{count:3d} members] {profile.name:20s} {profile.domain:25s} {profile.skillset[:45]}")

from collabrec import project_2d

coords = project_2d(index.vectors("hybrid"))
xs = [x for x, _ in coords]
ys = [y for _, y in coords]
print(f"\n2d projection for plotting: x in [{min(xs):.2f}, {max(xs):.2f}], "
      f"y in [{min(ys):.2f}, {max(ys):.2f}]")
