import numpy as np
import pytest

from collabrec.simcluster import (
    ClusterAssignment,
    SimilarityMatrix,
    affinity_propagation,
    cosine_similarity,
    project_2d,
    relabel,
    similarity_matrix,
)
from collabrec.vectorize import DenseVector, SparseVector

from ap_reference import reference_affinity_propagation
from cluster_fixtures import (
    DISTINCT_SIM_NAMES,
    blob_sizes,
    canonicalize,
    fixture_set,
)

FIXTURES = {name: (matrix, params, dup) for name, matrix, params, dup in fixture_set()}


class TestCosine:
    def test_known_angle(self):
        value = cosine_similarity(DenseVector(np.array([1.0, 0.0])),
                                  DenseVector(np.array([1.0, 1.0])))
        assert value == pytest.approx(0.7071067811865475, abs=1e-9)

    def test_identical_direction(self):
        a = DenseVector(np.array([2.0, 3.0]))
        b = DenseVector(np.array([4.0, 6.0]))
        assert cosine_similarity(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        a = SparseVector(((0, 1.0),), 2)
        b = SparseVector(((1, 1.0),), 2)
        assert cosine_similarity(a, b) == 0.0

    def test_zero_vector_scores_zero_with_warning(self):
        with pytest.warns(UserWarning, match="zero vector"):
            value = cosine_similarity(DenseVector(np.zeros(3)),
                                      DenseVector(np.ones(3)))
        assert value == 0.0

    def test_raw_arrays_accepted(self):
        assert cosine_similarity([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0)


class TestSimilarityMatrix:
    def make(self, n=6, dim=4, seed=0):
        rng = np.random.default_rng(seed)
        vectors = [DenseVector(rng.standard_normal(dim)) for _ in range(n)]
        return similarity_matrix(vectors, "embedding")

    def test_exactly_symmetric(self):
        sim = self.make()
        assert np.array_equal(sim.values, sim.values.T)

    def test_unit_diagonal_and_range(self):
        sim = self.make()
        assert np.allclose(np.diag(sim.values), 1.0)
        assert sim.values.min() >= -1.0 and sim.values.max() <= 1.0
        sim.validate()

    def test_entries_match_pairwise_cosine(self):
        rng = np.random.default_rng(3)
        vectors = [DenseVector(rng.standard_normal(5)) for _ in range(4)]
        sim = similarity_matrix(vectors, "embedding")
        for i in range(4):
            for j in range(i + 1, 4):
                assert sim.values[i, j] == pytest.approx(
                    cosine_similarity(vectors[i], vectors[j]), abs=1e-12
                )

    def test_mixed_representations_rejected(self):
        with pytest.raises(ValueError, match="mixed"):
            similarity_matrix(
                [DenseVector(np.ones(2)), SparseVector(((0, 1.0),), 2)], "hybrid"
            )

    def test_fewer_than_two_rejected(self):
        with pytest.raises(ValueError):
            similarity_matrix([DenseVector(np.ones(2))], "embedding")

    def test_unknown_technique_rejected(self):
        with pytest.raises(ValueError, match="technique"):
            SimilarityMatrix(n=1, values=np.ones((1, 1)), technique="psychic")

    def test_validate_flags_asymmetry(self):
        values = np.array([[1.0, 0.2], [0.3, 1.0]])
        sim = SimilarityMatrix(n=2, values=values, technique="tfidf")
        with pytest.raises(ValueError, match="symmetric"):
            sim.validate()

    def test_zero_vector_row_is_all_zero(self):
        with pytest.warns(UserWarning, match="zero vector"):
            sim = similarity_matrix(
                [DenseVector(np.zeros(3)), DenseVector(np.ones(3)),
                 DenseVector(np.array([1.0, 0.0, 0.0]))],
                "embedding",
            )
        assert np.all(sim.values[0] == 0.0)
        assert np.all(sim.values[:, 0] == 0.0)


class TestAffinityPropagation:
    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_matches_naive_reference(self, name):
        matrix, params, dup = FIXTURES[name]
        with pytest.warns(UserWarning) if name == "all_equal_8" else _noop():
            mine = affinity_propagation(matrix, **params)
        labels, exemplars, converged, iterations = reference_affinity_propagation(
            np.asarray(matrix).tolist(), **params
        )
        assert sorted(canonicalize(mine.exemplars, dup)) == sorted(canonicalize(exemplars, dup))
        assert canonicalize(mine.labels, dup) == canonicalize(labels, dup)
        assert mine.converged == converged
        assert mine.iterations_run == iterations

    def test_two_blobs_recovered(self):
        matrix, params, _ = FIXTURES["two_blob_20"]
        assignment = affinity_propagation(matrix, **params)
        assert assignment.n_clusters == 2
        assert assignment.converged
        truth = blob_sizes([None, None], [10, 10])
        dense = assignment.dense_labels()
        agreement = [dense[i] == dense[0] for i in range(20)]
        assert agreement == [t == truth[0] for t in truth]

    def test_three_blobs_recovered(self):
        matrix, params, _ = FIXTURES["three_blob_30"]
        assignment = affinity_propagation(matrix, **params)
        assert assignment.n_clusters == 3
        dense = assignment.dense_labels()
        assert dense == blob_sizes([None] * 3, [10, 10, 10])

    def test_all_equal_degenerates_to_single_cluster(self):
        matrix, _, _ = FIXTURES["all_equal_8"]
        with pytest.warns(UserWarning, match="no exemplar"):
            assignment = affinity_propagation(matrix)
        assert assignment.exemplars == (0,)
        assert set(assignment.labels) == {0}
        assert not assignment.converged

    def test_duplicates_share_a_cluster(self):
        matrix, _, dup = FIXTURES["duplicate_pair_10"]
        assignment = affinity_propagation(matrix)
        for twin, source in dup.items():
            assert assignment.labels[twin] == assignment.labels[source] or {
                assignment.labels[twin], assignment.labels[source]
            } == {twin, source}

    @pytest.mark.parametrize("name", DISTINCT_SIM_NAMES)
    def test_permutation_equivariance(self, name):
        matrix, params, _ = FIXTURES[name]
        arr = np.asarray(matrix)
        n = arr.shape[0]
        rng = np.random.default_rng(77)
        perm = rng.permutation(n)
        permuted = arr[np.ix_(perm, perm)]
        base = affinity_propagation(arr, **params)
        moved = affinity_propagation(permuted, **params)
        # point i of the base run sits at position inv[i] of the permuted run
        inv = np.empty(n, dtype=int)
        inv[perm] = np.arange(n)
        assert sorted(moved.exemplars) == sorted(inv[list(base.exemplars)])
        for i in range(n):
            assert moved.labels[inv[i]] == inv[base.labels[i]]

    def test_preference_controls_cluster_count(self):
        matrix, _, _ = FIXTURES["two_blob_20"]
        low = affinity_propagation(matrix, preference=-10.0)
        median = affinity_propagation(matrix)
        high = affinity_propagation(matrix, preference=0.99)
        assert low.n_clusters <= median.n_clusters <= high.n_clusters
        assert low.n_clusters == 1
        assert median.n_clusters == 2

    def test_damping_bounds(self):
        matrix, _, _ = FIXTURES["random_12"]
        for damping in (0.49, 1.0):
            with pytest.raises(ValueError, match="damping"):
                affinity_propagation(matrix, damping=damping)

    def test_iteration_bounds(self):
        matrix, _, _ = FIXTURES["random_12"]
        with pytest.raises(ValueError):
            affinity_propagation(matrix, max_iter=0)
        with pytest.raises(ValueError):
            affinity_propagation(matrix, convergence_iter=0)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            affinity_propagation(np.ones((3, 4)))

    def test_unconverged_run_is_flagged_not_raised(self):
        matrix, _, _ = FIXTURES["two_blob_20"]
        assignment = affinity_propagation(matrix, max_iter=3)
        assert not assignment.converged
        assert assignment.iterations_run == 3


def _noop():
    import contextlib

    return contextlib.nullcontext()


class TestClusterAssignment:
    def make(self, **overrides):
        kwargs = dict(
            labels=(0, 0, 2, 2), exemplars=(0, 2), n_clusters=2,
            iterations_run=10, converged=True,
        )
        kwargs.update(overrides)
        return ClusterAssignment(**kwargs)

    def test_dense_labels_first_appearance_order(self):
        # point 0 belongs to exemplar 7's cluster, so 7 renumbers to 0
        # even though 3 is the smaller exemplar index
        assignment = ClusterAssignment(
            labels=(7, 7, 7, 3, 7, 3, 3, 7), exemplars=(3, 7), n_clusters=2,
            iterations_run=1, converged=True,
        )
        assert assignment.dense_labels() == [0, 0, 0, 1, 0, 1, 1, 0]

    def test_label_must_be_an_exemplar(self):
        with pytest.raises(ValueError, match="not an exemplar"):
            self.make(labels=(0, 1, 2, 2))

    def test_exemplar_must_self_label(self):
        with pytest.raises(ValueError, match="label itself"):
            self.make(labels=(0, 0, 0, 0))

    def test_cluster_count_must_match(self):
        with pytest.raises(ValueError, match="n_clusters"):
            self.make(n_clusters=3)

    def test_empty_exemplars_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            ClusterAssignment(labels=(), exemplars=(), n_clusters=0,
                              iterations_run=0, converged=False)


class TestRelabel:
    def test_pairs_profiles_with_dense_ids(self):
        assignment = ClusterAssignment(
            labels=(0, 0, 3, 3), exemplars=(0, 3), n_clusters=2,
            iterations_run=1, converged=True,
        )
        pairs = relabel(["a", "b", "c", "d"], assignment)
        assert pairs == [("a", 0), ("b", 0), ("c", 1), ("d", 1)]

    def test_length_mismatch_rejected(self):
        assignment = ClusterAssignment(
            labels=(0,), exemplars=(0,), n_clusters=1,
            iterations_run=1, converged=True,
        )
        with pytest.raises(ValueError, match="does not match"):
            relabel(["a", "b"], assignment)


class TestProject2d:
    def test_collinear_points_keep_order_on_first_axis(self):
        vectors = [np.array([float(i), 0.0]) for i in range(4)]
        coords = project_2d(vectors)
        xs = [x for x, _ in coords]
        assert xs == sorted(xs)
        assert xs == pytest.approx([-1.5, -0.5, 0.5, 1.5])
        assert all(y == pytest.approx(0.0, abs=1e-12) for _, y in coords)

    def test_identical_points_collapse_to_origin(self):
        with pytest.warns(UserWarning, match="identical"):
            coords = project_2d([np.ones(3)] * 4)
        assert coords == [(0.0, 0.0)] * 4

    def test_duplicate_inputs_get_duplicate_coordinates(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal(6)
        vectors = [a, rng.standard_normal(6), a.copy(), rng.standard_normal(6)]
        coords = project_2d(vectors)
        assert coords[0] == pytest.approx(coords[2], abs=1e-9)

    def test_deterministic_across_calls(self):
        rng = np.random.default_rng(6)
        vectors = [rng.standard_normal(8) for _ in range(10)]
        assert project_2d(vectors) == project_2d(vectors)

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            project_2d([np.ones(2)])
