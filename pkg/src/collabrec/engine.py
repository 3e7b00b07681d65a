"""Corpus-wide vectorization/clustering state shared by the recommender,
the experiment pipeline, and the matching service.

A CorpusIndex is an immutable snapshot: build it once from a profile
list, then read per-technique vectors, similarity matrices and cluster
assignments from it.  Rebuilding after profile changes happens by
constructing a fresh index and swapping the reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Profile, load_stopwords, preprocess, stem_tokens
from .evalmetrics import DEFAULT_GRADE_THRESHOLDS
from .simcluster import (
    ClusterAssignment,
    SimilarityMatrix,
    affinity_propagation,
    similarity_matrix,
)
from .vectorize import (
    EmbeddingProvider,
    HashedProjectionProvider,
    build_vocabulary,
    hybrid_vector,
    tfidf_vector,
)


@dataclass(frozen=True)
class EngineConfig:
    alpha: float = 0.5
    embed_dimension: int = 256
    embed_seed: int = 1337
    damping: float = 0.5
    max_iter: int = 200
    convergence_iter: int = 15
    preference: float | str = "median"
    ndcg_depth: int = 5
    grade_thresholds: tuple[float, float, float] = DEFAULT_GRADE_THRESHOLDS

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")


class CorpusIndex:
    """Vectors, similarities and clusters for one frozen profile list."""

    def __init__(
        self,
        profiles: list[Profile],
        config: EngineConfig | None = None,
        provider: EmbeddingProvider | None = None,
        stopwords: frozenset[str] | None = None,
    ):
        if len(profiles) < 2:
            raise ValueError("an index needs at least two profiles")
        self.config = config or EngineConfig()
        self.stopwords = load_stopwords() if stopwords is None else stopwords
        self.provider = provider or HashedProjectionProvider(
            dimension=self.config.embed_dimension, seed=self.config.embed_seed
        )
        self.profiles = list(profiles)
        self.by_id = {p.id: p for p in self.profiles}
        if len(self.by_id) != len(self.profiles):
            raise ValueError("profile ids must be unique")
        self._position = {p.id: i for i, p in enumerate(self.profiles)}

        self.docs = [preprocess(p, self.stopwords) for p in self.profiles]
        self.token_sets = [set(d.tokens) for d in self.docs]
        stemmed = [stem_tokens(d) for d in self.docs]
        self.vocabulary = build_vocabulary(stemmed)
        self.tfidf_vectors = [tfidf_vector(d, self.vocabulary) for d in stemmed]
        # the dense branch sees stop-word-free but unstemmed text
        self.embed_vectors = [
            self.provider.vector_for(" ".join(d.tokens), profile_id=d.profile_id)
            for d in self.docs
        ]
        self._hybrid = None
        self._sims: dict[str, SimilarityMatrix] = {}
        self._assignments: dict[str, ClusterAssignment] = {}

    @property
    def hybrid_vectors(self):
        if self._hybrid is None:
            self._hybrid = [
                hybrid_vector(t, e, self.config.alpha)
                for t, e in zip(self.tfidf_vectors, self.embed_vectors)
            ]
        return self._hybrid

    def vectors(self, technique: str):
        if technique == "tfidf":
            return self.tfidf_vectors
        if technique == "embedding":
            return self.embed_vectors
        if technique == "hybrid":
            return self.hybrid_vectors
        raise ValueError(f"unknown technique {technique!r}")

    def sim(self, technique: str) -> SimilarityMatrix:
        if technique not in self._sims:
            self._sims[technique] = similarity_matrix(
                self.vectors(technique), technique
            )
        return self._sims[technique]

    def assignment(self, technique: str) -> ClusterAssignment:
        if technique not in self._assignments:
            cfg = self.config
            self._assignments[technique] = affinity_propagation(
                self.sim(technique),
                damping=cfg.damping,
                max_iter=cfg.max_iter,
                convergence_iter=cfg.convergence_iter,
                preference=cfg.preference,
            )
        return self._assignments[technique]

    def cluster_of(self, technique: str, profile_id: str) -> int:
        dense = self.assignment(technique).dense_labels()
        return dense[self.index_of(profile_id)]

    def index_of(self, profile_id: str) -> int:
        return self._position[profile_id]
