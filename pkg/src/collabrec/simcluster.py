"""Pairwise cosine similarity and affinity-propagation clustering.

Affinity propagation is implemented as the standard responsibility /
availability message-passing scheme on the cosine similarity matrix,
with the self-similarity (preference) defaulting to the median of the
off-diagonal entries.  All argmax tie-breaks resolve to the lowest
index, so runs are fully deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .vectorize import DenseVector, HybridVector, SparseVector

TECHNIQUES = ("tfidf", "embedding", "hybrid")


@dataclass(frozen=True)
class SimilarityMatrix:
    n: int
    values: np.ndarray
    technique: str

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.shape != (self.n, self.n):
            raise ValueError("similarity matrix shape does not match n")
        if self.technique not in TECHNIQUES:
            raise ValueError(f"unknown technique {self.technique!r}")
        object.__setattr__(self, "values", arr)

    def validate(self, tol: float = 1e-9) -> None:
        arr = self.values
        if not np.allclose(arr, arr.T, atol=tol, rtol=0):
            raise ValueError("similarity matrix is not symmetric")
        if arr.min() < -1.0 - tol or arr.max() > 1.0 + tol:
            raise ValueError("similarity values outside [-1, 1]")


@dataclass(frozen=True)
class ClusterAssignment:
    """Exemplar-index labelling: labels[i] is the exemplar point of i's cluster."""

    labels: tuple[int, ...]
    exemplars: tuple[int, ...]
    n_clusters: int
    iterations_run: int
    converged: bool

    def __post_init__(self):
        exemplar_set = set(self.exemplars)
        if not exemplar_set:
            raise ValueError("assignment must have at least one exemplar")
        if self.n_clusters != len(self.exemplars):
            raise ValueError("n_clusters must equal the exemplar count")
        for i, label in enumerate(self.labels):
            if label not in exemplar_set:
                raise ValueError(f"label of point {i} is not an exemplar")
        for e in self.exemplars:
            if self.labels[e] != e:
                raise ValueError(f"exemplar {e} does not label itself")

    def dense_labels(self) -> list[int]:
        """Cluster ids renumbered 0..k-1 in order of first appearance."""
        mapping: dict[int, int] = {}
        out = []
        for label in self.labels:
            if label not in mapping:
                mapping[label] = len(mapping)
            out.append(mapping[label])
        return out


def dense_array(vector) -> np.ndarray:
    """Any vector representation as a flat float64 array."""
    if isinstance(vector, SparseVector):
        return vector.to_dense()
    if isinstance(vector, DenseVector):
        return vector.values
    if isinstance(vector, HybridVector):
        return np.concatenate(
            [vector.tfidf_part.to_dense(), vector.embed_part.values]
        )
    return np.asarray(vector, dtype=np.float64)


def cosine_similarity(a, b) -> float:
    """cos(angle) of two vectors; degenerate zero vectors score 0.0 with a warning."""
    if isinstance(a, (SparseVector, DenseVector, HybridVector)) and type(a) is type(b):
        dot = a.dot(b)
        norm_a, norm_b = a.norm(), b.norm()
    else:
        va, vb = dense_array(a), dense_array(b)
        dot = float(va @ vb)
        norm_a = float(np.linalg.norm(va))
        norm_b = float(np.linalg.norm(vb))
    if norm_a == 0.0 or norm_b == 0.0:
        warnings.warn("cosine of a zero vector is defined as 0.0", stacklevel=2)
        return 0.0
    return dot / (norm_a * norm_b)


def similarity_matrix(vectors: Sequence, technique: str) -> SimilarityMatrix:
    """Full symmetric cosine matrix over one uniform representation."""
    if len(vectors) < 2:
        raise ValueError("need at least two vectors")
    kinds = {type(v) for v in vectors}
    if len(kinds) != 1:
        raise ValueError(f"mixed vector representations: {sorted(k.__name__ for k in kinds)}")
    rows = np.stack([dense_array(v) for v in vectors])
    norms = np.linalg.norm(rows, axis=1)
    zero = norms == 0.0
    if zero.any():
        warnings.warn(
            f"{int(zero.sum())} zero vector(s); their similarities are 0.0",
            stacklevel=2,
        )
    safe = np.where(zero, 1.0, norms)
    unit = rows / safe[:, None]
    gram = unit @ unit.T
    upper = np.triu(gram, k=1)
    values = upper + upper.T
    np.fill_diagonal(values, np.where(zero, 0.0, 1.0))
    np.clip(values, -1.0, 1.0, out=values)
    return SimilarityMatrix(n=len(vectors), values=values, technique=technique)


def affinity_propagation(
    sim: SimilarityMatrix | np.ndarray,
    damping: float = 0.5,
    max_iter: int = 200,
    convergence_iter: int = 15,
    preference: float | str = "median",
) -> ClusterAssignment:
    """Cluster by responsibility/availability message passing.

    Messages are damped as new = damping * old + (1 - damping) * computed;
    exemplars are the points whose self responsibility + availability is
    positive, and iteration stops once that set has been stable for
    ``convergence_iter`` consecutive iterations.  Non-convergence within
    ``max_iter`` is not an error: the best-effort assignment is returned
    with converged=False.  A fully degenerate run that elects no exemplar
    (possible when every similarity ties) falls back to a single exemplar,
    the point with the largest self message.
    """
    if not 0.5 <= damping < 1.0:
        raise ValueError("damping must lie in [0.5, 1)")
    if max_iter < 1 or convergence_iter < 1:
        raise ValueError("iteration counts must be positive")
    values = sim.values if isinstance(sim, SimilarityMatrix) else np.asarray(sim, dtype=np.float64)
    n = values.shape[0]
    if values.shape != (n, n):
        raise ValueError("similarity matrix must be square")

    S = values.copy()
    if preference == "median":
        off_diag = S[~np.eye(n, dtype=bool)]
        pref = float(np.median(off_diag)) if off_diag.size else 0.0
    else:
        pref = float(preference)
    np.fill_diagonal(S, pref)

    R = np.zeros((n, n))
    A = np.zeros((n, n))
    row_idx = np.arange(n)
    prev_exemplars: tuple[int, ...] | None = None
    stable_run = 0
    converged = False
    iterations_run = 0

    for iteration in range(1, max_iter + 1):
        iterations_run = iteration

        # responsibilities: r(i,k) = s(i,k) - max_{k' != k} [a(i,k') + s(i,k')]
        AS = A + S
        best = np.argmax(AS, axis=1)  # ties resolve to the lowest index
        best_val = AS[row_idx, best]
        AS[row_idx, best] = -np.inf
        second_val = np.max(AS, axis=1)
        R_new = S - best_val[:, None]
        R_new[row_idx, best] = S[row_idx, best] - second_val
        R = damping * R + (1.0 - damping) * R_new

        # availabilities from the freshly damped responsibilities
        Rp = np.maximum(R, 0.0)
        np.fill_diagonal(Rp, R.diagonal())
        col_sum = Rp.sum(axis=0)
        A_new = col_sum[None, :] - Rp
        diag_new = A_new.diagonal().copy()
        A_new = np.minimum(A_new, 0.0)
        np.fill_diagonal(A_new, diag_new)
        A = damping * A + (1.0 - damping) * A_new

        exemplars = tuple(np.flatnonzero(R.diagonal() + A.diagonal() > 0.0))
        if exemplars and exemplars == prev_exemplars:
            stable_run += 1
        else:
            stable_run = 1 if exemplars else 0
        prev_exemplars = exemplars
        if stable_run >= convergence_iter:
            converged = True
            break

    self_message = R.diagonal() + A.diagonal()
    exemplar_idx = np.flatnonzero(self_message > 0.0)
    if exemplar_idx.size == 0:
        warnings.warn(
            "degenerate run elected no exemplar; falling back to a single cluster",
            stacklevel=2,
        )
        exemplar_idx = np.array([int(np.argmax(self_message))])

    labels = exemplar_idx[np.argmax(S[:, exemplar_idx], axis=1)]
    labels[exemplar_idx] = exemplar_idx  # exemplars always self-label
    return ClusterAssignment(
        labels=tuple(int(x) for x in labels),
        exemplars=tuple(int(x) for x in exemplar_idx),
        n_clusters=int(exemplar_idx.size),
        iterations_run=iterations_run,
        converged=converged,
    )


def relabel(profiles: Sequence, assignment: ClusterAssignment) -> list[tuple[object, int]]:
    """Pair each profile with its dense cluster id (0..k-1, first-appearance order)."""
    if len(profiles) != len(assignment.labels):
        raise ValueError(
            f"profile count {len(profiles)} does not match label count {len(assignment.labels)}"
        )
    dense = assignment.dense_labels()
    return list(zip(profiles, dense))


def project_2d(vectors: Sequence) -> list[tuple[float, float]]:
    """Top-2 principal-component coordinates, mean-centered.

    Sign convention: each component is flipped so its largest-magnitude
    loading is positive, making the output deterministic.  Rank-deficient
    input degrades gracefully (identical points land at the origin).
    """
    if len(vectors) < 2:
        raise ValueError("need at least two vectors")
    X = np.stack([dense_array(v) for v in vectors])
    Xc = X - X.mean(axis=0)
    if not np.any(Xc):
        warnings.warn("all vectors identical; projecting every point to the origin", stacklevel=2)
        return [(0.0, 0.0)] * len(vectors)
    _, svals, Vt = np.linalg.svd(Xc, full_matrices=False)
    coords = np.zeros((X.shape[0], 2))
    n_components = min(2, int(np.sum(svals > 1e-12)))
    for j in range(n_components):
        component = Vt[j]
        anchor = int(np.argmax(np.abs(component)))
        if component[anchor] < 0:
            component = -component
        coords[:, j] = Xc @ component
    return [(float(x), float(y)) for x, y in coords]
