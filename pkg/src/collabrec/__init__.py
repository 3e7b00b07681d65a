"""Hybrid sparse/dense profile recommendation engine for academic collaboration."""

__version__ = "0.1.0"

from .corpus import (
    DEFAULT_SKILL_POOL,
    CorpusValidationError,
    Profile,
    SkillPool,
    TokenDocument,
    generate_synthetic,
    load_profiles,
    load_profiles_file,
    load_stopwords,
    preprocess,
    stem_tokens,
)
from .engine import CorpusIndex, EngineConfig
from .recommender import (
    NoCandidatesError,
    Recommendation,
    RecommendationFilters,
    RecommendationQuery,
    UnknownTargetError,
    recommend,
)
from .simcluster import (
    ClusterAssignment,
    SimilarityMatrix,
    affinity_propagation,
    cosine_similarity,
    project_2d,
    relabel,
    similarity_matrix,
)
from .vectorize import (
    DenseVector,
    FileImportProvider,
    HashedProjectionProvider,
    HybridVector,
    MissingEmbeddingError,
    SparseVector,
    Vocabulary,
    build_vocabulary,
    embed,
    hybrid_vector,
    tfidf_vector,
)
from .demo import (
    DEMO_TARGET_EMAIL,
    DEMO_TARGET_ID,
    demo_embedding_provider,
    load_demo_profiles,
)
from .evalmetrics import (
    EvaluationRun,
    davies_bouldin,
    grade_overlap,
    intra_cluster_similarity,
    mean_average_precision,
    ndcg,
    silhouette,
)
from .pipeline import ExperimentResult, PipelineError, run_experiment
