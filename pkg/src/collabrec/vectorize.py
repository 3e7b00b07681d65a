"""Sparse TF-IDF vectors, dense embeddings, and their hybrid fusion.

TF-IDF weights follow tf(t, d) * log(N / df(t)) with tf the within-
document relative frequency.  The log base is natural log; cosine
similarity is invariant to that choice because a base change rescales
every IDF by one global constant (asserted in the test suite).

"Simple averaging" of the two representations is realized as a weighted
concatenation of unit-normalized parts scaled by sqrt(alpha) and
sqrt(1 - alpha): the cosine of two such hybrid vectors is then exactly
alpha * cos_tfidf + (1 - alpha) * cos_embed, i.e. the plain average of
the two similarities at alpha = 0.5.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .corpus import TokenDocument, tokenize

HASH_BUCKETS = 1 << 16  # feature-hashing width; collision odds documented in README


@dataclass(frozen=True)
class Vocabulary:
    term_to_index: Mapping[str, int]
    document_frequency: Mapping[str, int]
    n_documents: int

    @property
    def size(self) -> int:
        return len(self.term_to_index)


@dataclass(frozen=True)
class SparseVector:
    """Index-sorted (index, weight) entries over a fixed dimension."""

    entries: tuple[tuple[int, float], ...]
    dimension: int

    def __post_init__(self):
        last = -1
        for index, weight in self.entries:
            if index <= last or index >= self.dimension:
                raise ValueError("sparse entries must be strictly increasing and in range")
            if not math.isfinite(weight):
                raise ValueError("sparse weights must be finite")
            last = index

    def norm(self) -> float:
        return math.sqrt(sum(w * w for _, w in self.entries))

    def dot(self, other: "SparseVector") -> float:
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        total = 0.0
        i, j = 0, 0
        a, b = self.entries, other.entries
        while i < len(a) and j < len(b):
            ia, ib = a[i][0], b[j][0]
            if ia == ib:
                total += a[i][1] * b[j][1]
                i += 1
                j += 1
            elif ia < ib:
                i += 1
            else:
                j += 1
        return total

    def scaled(self, factor: float) -> "SparseVector":
        return SparseVector(
            tuple((i, w * factor) for i, w in self.entries), self.dimension
        )

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dimension)
        for i, w in self.entries:
            out[i] = w
        return out


@dataclass(frozen=True)
class DenseVector:
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("dense vector must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("dense vector must be finite")
        object.__setattr__(self, "values", arr)

    @property
    def dimension(self) -> int:
        return self.values.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def dot(self, other: "DenseVector") -> float:
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        return float(self.values @ other.values)

    def scaled(self, factor: float) -> "DenseVector":
        return DenseVector(self.values * factor)


@dataclass(frozen=True)
class HybridVector:
    """Weighted concatenation of unit-normalized sparse and dense parts."""

    tfidf_part: SparseVector
    embed_part: DenseVector
    alpha: float

    def norm(self) -> float:
        return math.sqrt(self.tfidf_part.norm() ** 2 + self.embed_part.norm() ** 2)

    def dot(self, other: "HybridVector") -> float:
        return self.tfidf_part.dot(other.tfidf_part) + self.embed_part.dot(
            other.embed_part
        )


def build_vocabulary(docs: Sequence[TokenDocument]) -> Vocabulary:
    """Vocabulary over the token union; df counts documents, not occurrences."""
    if not docs:
        raise ValueError("cannot build a vocabulary from zero documents")
    if all(len(d.tokens) == 0 for d in docs):
        raise ValueError("all documents are empty after preprocessing")
    df: Counter = Counter()
    for doc in docs:
        df.update(set(doc.tokens))
    terms = sorted(df)
    return Vocabulary(
        term_to_index={t: i for i, t in enumerate(terms)},
        document_frequency=dict(df),
        n_documents=len(docs),
    )


def tfidf_vector(
    doc: TokenDocument, vocab: Vocabulary, log_base: float = math.e
) -> SparseVector:
    """TF-IDF weights for one document against a corpus vocabulary.

    Out-of-vocabulary tokens are dropped (query documents); zero weights,
    including terms present in every document, are omitted from entries.
    An empty document yields a zero vector and a warning.
    """
    if not doc.tokens:
        warnings.warn(
            f"document {doc.profile_id!r} has no tokens; zero vector",
            stacklevel=2,
        )
        return SparseVector((), vocab.size)
    counts = Counter(t for t in doc.tokens if t in vocab.term_to_index)
    total = len(doc.tokens)
    entries = []
    for term, count in counts.items():
        idf = math.log(vocab.n_documents / vocab.document_frequency[term], log_base)
        weight = (count / total) * idf
        if weight != 0.0:
            entries.append((vocab.term_to_index[term], weight))
    entries.sort()
    return SparseVector(tuple(entries), vocab.size)


class EmbeddingProvider:
    """Deterministic text-to-dense-vector source.

    Two kinds exist: ``file_import`` replays vectors produced elsewhere
    and bundled as JSON-lines, keyed by profile id; ``hashed_projection``
    synthesizes a vector from the text itself and needs no id.
    """

    provider_kind: str
    dimension: int

    def vector_for(self, text: str, profile_id: str | None = None) -> DenseVector:
        raise NotImplementedError


class MissingEmbeddingError(KeyError):
    pass


class FileImportProvider(EmbeddingProvider):
    provider_kind = "file_import"

    def __init__(self, vectors: Mapping[str, Sequence[float]]):
        if not vectors:
            raise ValueError("embedding import is empty")
        dims = {len(v) for v in vectors.values()}
        if len(dims) != 1:
            raise ValueError(f"embedding import mixes dimensions: {sorted(dims)}")
        self.dimension = dims.pop()
        self._vectors = {
            key: DenseVector(np.asarray(v, dtype=np.float64))
            for key, v in vectors.items()
        }

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "FileImportProvider":
        """Load ``{"id": ..., "vector": [...]}`` JSON-lines."""
        vectors = {}
        with Path(path).open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                record = json.loads(line)
                if "id" not in record or "vector" not in record:
                    raise ValueError(f"line {line_no}: expected 'id' and 'vector' keys")
                vectors[str(record["id"])] = record["vector"]
        return cls(vectors)

    def vector_for(self, text: str, profile_id: str | None = None) -> DenseVector:
        if profile_id is None:
            raise ValueError("file_import provider needs a profile id")
        try:
            return self._vectors[profile_id]
        except KeyError:
            raise MissingEmbeddingError(
                f"no imported embedding for profile {profile_id!r}"
            ) from None

    def ids(self):
        return self._vectors.keys()


class HashedProjectionProvider(EmbeddingProvider):
    """Feature-hash tokens into 2^16 buckets, then project with seeded Gaussians.

    Each occupied bucket contributes count * g_b where g_b is a Gaussian
    row drawn from a PRNG seeded by (seed, bucket); the result is a
    deterministic function of the text alone.  This is plumbing that gives
    the pipeline a dense branch at desk scale, not a claim of semantic
    embedding quality.
    """

    provider_kind = "hashed_projection"

    def __init__(self, dimension: int = 256, seed: int = 1337):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self.seed = seed
        self._rows: dict[int, np.ndarray] = {}

    def _bucket(self, token: str) -> int:
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") % HASH_BUCKETS

    def _row(self, bucket: int) -> np.ndarray:
        row = self._rows.get(bucket)
        if row is None:
            rng = np.random.default_rng([self.seed, bucket])
            row = rng.standard_normal(self.dimension)
            self._rows[bucket] = row
        return row

    def vector_for(self, text: str, profile_id: str | None = None) -> DenseVector:
        counts = Counter(self._bucket(t) for t in tokenize(text))
        out = np.zeros(self.dimension)
        for bucket, count in sorted(counts.items()):
            out += count * self._row(bucket)
        return DenseVector(out)


def embed(text: str, provider: EmbeddingProvider, profile_id: str | None = None) -> DenseVector:
    """Resolve one profile text to a dense vector through the provider."""
    return provider.vector_for(text, profile_id)


def hybrid_vector(tfidf: SparseVector, embedding: DenseVector, alpha: float) -> HybridVector:
    """Fuse one profile's two representations at mixing weight alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    tfidf_norm = tfidf.norm()
    embed_norm = embedding.norm()
    if tfidf_norm == 0.0:
        raise ValueError("tfidf part has zero norm; cannot build hybrid vector")
    if embed_norm == 0.0:
        raise ValueError("embedding part has zero norm; cannot build hybrid vector")
    return HybridVector(
        tfidf_part=tfidf.scaled(math.sqrt(alpha) / tfidf_norm),
        embed_part=embedding.scaled(math.sqrt(1.0 - alpha) / embed_norm),
        alpha=alpha,
    )
