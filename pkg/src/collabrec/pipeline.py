"""End-to-end experiment: vectorize, cluster, evaluate, export artifacts.

For each requested technique the pipeline builds the similarity matrix,
clusters it, computes the five quality metrics, and ranks every profile
against every other.  Relevance ground truth comes from the
method-independent token-overlap oracle, so the three techniques compete
on the same footing.

All outputs are deterministic for a fixed corpus, seed and config: terms
and candidates sort stably, JSON is written with sorted keys, and no
timestamps enter any artifact.  Running twice must produce byte-identical
files; the test suite holds the pipeline to that.

Output directory layout:
    report.json            metric values, config echo, seed
    report.txt             5 metric rows x method columns (Table layout)
    sim_<method>.json      profile ids + full similarity matrix
    clusters_<method>.json labels, exemplars, convergence data
    coords_<method>.csv    id,x,y,cluster 2D projection
    rankings_<method>.json per-query ranked candidates with oracle grades
    recommendations.json   top-5 per designated target per method
    manifest.json          seed, config hash, library versions
"""

from __future__ import annotations

import csv
import hashlib
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import Profile
from .engine import CorpusIndex, EngineConfig
from .evalmetrics import (
    davies_bouldin,
    grade_overlap,
    intra_cluster_similarity,
    mean_average_precision,
    ndcg,
    silhouette,
)
from .recommender import RecommendationQuery, recommend
from .simcluster import TECHNIQUES, dense_array, project_2d
from .vectorize import EmbeddingProvider

METRIC_ROWS = ("Davies-Bouldin", "Silhouette", "Intra-Cluster", "NDCG", "mAP")
METHOD_LABELS = {"tfidf": "TF-IDF", "embedding": "Embedding", "hybrid": "Hybrid"}


class PipelineError(RuntimeError):
    """A stage failure annotated with its technique."""


@dataclass(frozen=True)
class ExperimentResult:
    seed: int
    methods: tuple[str, ...]
    metrics: dict[str, dict[str, float]]
    out_dir: Path
    report_path: Path


def _normalized_rows(vectors) -> list[np.ndarray]:
    rows = []
    for vector in vectors:
        arr = dense_array(vector)
        norm = float(np.linalg.norm(arr))
        rows.append(arr / norm if norm > 0 else arr)
    return rows


def _grade_matrix(index: CorpusIndex) -> list[list[int]]:
    """Oracle grades for every ordered (query, candidate) pair."""
    n = len(index.profiles)
    thresholds = index.config.grade_thresholds
    grades = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                grades[i][j] = grade_overlap(
                    index.token_sets[i], index.token_sets[j], thresholds
                )
    return grades


def _rank_all(index: CorpusIndex, method: str) -> dict[str, list[str]]:
    """Every profile as a query: full candidate ranking, ties by id."""
    sim = index.sim(method)
    rankings = {}
    for qpos, query in enumerate(index.profiles):
        order = sorted(
            (
                (-float(sim.values[qpos, cpos]), candidate.id)
                for cpos, candidate in enumerate(index.profiles)
                if cpos != qpos
            ),
        )
        rankings[query.id] = [candidate_id for _, candidate_id in order]
    return rankings


def _write_json(path: Path, payload) -> None:
    path.write_text(
        json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def _config_hash(config: EngineConfig, seed: int, methods: tuple[str, ...]) -> str:
    canonical = json.dumps(
        {"config": asdict(config), "methods": list(methods), "seed": seed},
        sort_keys=True,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def format_report_table(metrics: dict[str, dict[str, float]], methods) -> str:
    header = ["Metric"] + [METHOD_LABELS.get(m, m) for m in methods]
    rows = [header]
    for metric in METRIC_ROWS:
        rows.append([metric] + [f"{metrics[m][metric]:.4f}" for m in methods])
    widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
    lines = []
    for row in rows:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    lines.insert(1, "-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def run_experiment(
    profiles: list[Profile],
    out_dir: str | Path,
    seed: int = 42,
    methods: tuple[str, ...] = TECHNIQUES,
    config: EngineConfig | None = None,
    provider: EmbeddingProvider | None = None,
    target_ids: tuple[str, ...] = (),
    top_k: int = 5,
) -> ExperimentResult:
    for method in methods:
        if method not in TECHNIQUES:
            raise ValueError(f"unknown method {method!r}; expected one of {TECHNIQUES}")
    if not methods:
        raise ValueError("at least one method is required")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = config or EngineConfig()
    index = CorpusIndex(profiles, config, provider=provider)
    for target_id in target_ids:
        if target_id not in index.by_id:
            raise ValueError(f"designated target {target_id!r} is not in the corpus")

    grades = _grade_matrix(index)
    position = {p.id: i for i, p in enumerate(index.profiles)}

    metrics: dict[str, dict[str, float]] = {}
    recommendations: dict[str, dict[str, list[dict]]] = {}
    for method in methods:
        try:
            sim = index.sim(method)
            sim.validate()
            assignment = index.assignment(method)
            dense = assignment.dense_labels()

            rankings = _rank_all(index, method)
            graded = [
                [grades[position[qid]][position[cid]] for cid in ranking]
                for qid, ranking in rankings.items()
            ]
            flagged = [[g >= 1 for g in row] for row in graded]

            metrics[method] = {
                "Davies-Bouldin": davies_bouldin(
                    _normalized_rows(index.vectors(method)), dense
                ),
                "Silhouette": silhouette(sim, dense),
                "Intra-Cluster": intra_cluster_similarity(sim, dense),
                "NDCG": ndcg(graded, depth=config.ndcg_depth),
                "mAP": mean_average_precision(flagged),
            }

            _write_json(
                out_dir / f"sim_{method}.json",
                {"ids": [p.id for p in index.profiles], "values": sim.values.tolist()},
            )
            _write_json(
                out_dir / f"clusters_{method}.json",
                {
                    "labels": list(assignment.labels),
                    "dense_labels": dense,
                    "exemplars": list(assignment.exemplars),
                    "n_clusters": assignment.n_clusters,
                    "iterations_run": assignment.iterations_run,
                    "converged": assignment.converged,
                },
            )
            coords = project_2d(index.vectors(method))
            with (out_dir / f"coords_{method}.csv").open("w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["id", "x", "y", "cluster"])
                for profile, (x, y), cluster in zip(index.profiles, coords, dense):
                    writer.writerow([profile.id, repr(x), repr(y), cluster])
            _write_json(
                out_dir / f"rankings_{method}.json",
                {
                    "depth": config.ndcg_depth,
                    "queries": {
                        qid: {
                            "ranking": ranking,
                            "grades": [grades[position[qid]][position[cid]] for cid in ranking],
                        }
                        for qid, ranking in rankings.items()
                    },
                },
            )

            recommendations[method] = {
                target_id: [
                    {
                        "candidate": r.candidate_id,
                        "name": index.by_id[r.candidate_id].name,
                        "summary": index.by_id[r.candidate_id].combined_text(),
                        "similarity": r.similarity,
                        "cluster": r.cluster,
                        "rank": r.rank,
                    }
                    for r in recommend(
                        index,
                        RecommendationQuery(target_id=target_id, technique=method, k=top_k),
                        apply_filters=False,
                    )
                ]
                for target_id in target_ids
            }
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(f"[{method}] {exc}") from exc

    report = {
        "seed": seed,
        "methods": list(methods),
        "metrics": metrics,
        "config": asdict(config),
        "n_profiles": len(index.profiles),
    }
    _write_json(out_dir / "report.json", report)
    report_txt = out_dir / "report.txt"
    report_txt.write_text(format_report_table(metrics, methods), encoding="utf-8")
    if target_ids:
        _write_json(out_dir / "recommendations.json", recommendations)
    _write_json(
        out_dir / "manifest.json",
        {
            "seed": seed,
            "config_hash": _config_hash(config, seed, tuple(methods)),
            "versions": {
                "collabrec": __version__,
                "numpy": np.__version__,
                "python": ".".join(map(str, sys.version_info[:3])),
            },
            "n_profiles": len(index.profiles),
            "methods": list(methods),
        },
    )
    return ExperimentResult(
        seed=seed,
        methods=tuple(methods),
        metrics=metrics,
        out_dir=out_dir,
        report_path=report_txt,
    )
