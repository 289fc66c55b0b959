import numpy as np
import pytest

from ontoclass.baselines import (
    CentroidModel,
    centroid_rank,
    centroid_train,
    load_centroid,
    load_logistic,
    logistic_rank,
    logistic_train,
    save_centroid,
    save_logistic,
    softmax_loss_and_grad,
)
from ontoclass.errors import (
    CorruptModel,
    DegenerateData,
    DimensionMismatch,
    SchemaVersionMismatch,
)


class TestCentroidTrain:
    def test_mean_per_label(self):
        X = np.array([[1.0, 0.0], [3.0, 0.0], [0.0, 2.0]])
        model = centroid_train(X, ["A", "A", "B"])
        assert model.classes == ["A", "B"]
        np.testing.assert_array_equal(model.centroids[0], [2.0, 0.0])
        np.testing.assert_array_equal(model.centroids[1], [0.0, 2.0])

    def test_single_example_is_its_own_centroid(self):
        X = np.array([[1.5, -2.0]])
        model = centroid_train(X, ["A"])
        np.testing.assert_array_equal(model.centroids[0], X[0])

    def test_empty_input(self):
        with pytest.raises(DegenerateData):
            centroid_train(np.zeros((0, 2)), [])


class TestCentroidRank:
    def make_model(self):
        return CentroidModel(
            dim=2,
            classes=["A", "B"],
            centroids=np.array([[1.0, 0.0], [0.0, 1.0]]),
        )

    def test_geometry(self):
        ranked = centroid_rank(self.make_model(), [0.9, 0.1])
        assert ranked.ranked_labels == ["A", "B"]
        assert ranked.scores[0] > ranked.scores[1]

    def test_equidistant_tie_lexicographic(self):
        ranked = centroid_rank(self.make_model(), [1.0, 1.0])
        assert ranked.ranked_labels == ["A", "B"]
        assert ranked.scores[0] == ranked.scores[1]

    def test_zero_query_full_lexicographic(self):
        model = CentroidModel(
            dim=2,
            classes=["d", "b", "a"],
            centroids=np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
        )
        ranked = centroid_rank(model, [0.0, 0.0])
        assert ranked.ranked_labels == ["a", "b", "d"]

    def test_zero_centroid_similarity_zero(self):
        model = CentroidModel(
            dim=2,
            classes=["far", "zero"],
            centroids=np.array([[-1.0, 0.0], [0.0, 0.0]]),
        )
        # query aligned against "far": cos=-1 < 0 = zero-centroid similarity
        ranked = centroid_rank(model, [1.0, 0.0])
        assert ranked.ranked_labels == ["zero", "far"]

    def test_scale_invariance(self):
        model = self.make_model()
        base = centroid_rank(model, [0.3, 0.2])
        for factor in [4.0, 0.25, 3.0, 100.0]:
            scaled = centroid_rank(model, [0.3 * factor, 0.2 * factor])
            assert scaled.ranked_labels == base.ranked_labels
            np.testing.assert_allclose(scaled.scores, base.scores, rtol=1e-12)

    def test_scores_form_simplex(self):
        rng = np.random.default_rng(2)
        model = self.make_model()
        for _ in range(100):
            ranked = centroid_rank(model, rng.normal(size=2))
            assert abs(sum(ranked.scores) - 1.0) <= 1e-9
            assert all(s >= 0.0 for s in ranked.scores)

    def test_euclidean_mode(self):
        model = self.make_model()
        ranked = centroid_rank(model, [0.9, 0.1], metric="euclidean")
        assert ranked.ranked_labels == ["A", "B"]
        with pytest.raises(ValueError):
            centroid_rank(model, [0.9, 0.1], metric="manhattan")

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            centroid_rank(self.make_model(), [1.0, 2.0, 3.0])


class TestLogisticTrain:
    def test_separable_data_perfect_training_accuracy(self):
        # 1-D data separable at x=0: any boundary in (-1, 1) classifies
        # perfectly, so convergence to 100% training accuracy is guaranteed.
        X = np.array([[-2.0], [-1.5], [-1.0], [1.0], [1.5], [2.0]])
        y = ["neg", "neg", "neg", "pos", "pos", "pos"]
        model = logistic_train(X, y, epochs=300, learning_rate=0.5, l2=0.0)
        predictions = [logistic_rank(model, row).ranked_labels[0] for row in X]
        assert predictions == y

    def test_single_class_rejected(self):
        with pytest.raises(DegenerateData):
            logistic_train(np.zeros((3, 1)), ["A"] * 3)

    def test_deterministic(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(20, 3))
        y = [str(v) for v in rng.integers(0, 2, size=20)]
        a = logistic_train(X, y, epochs=50)
        b = logistic_train(X, y, epochs=50)
        np.testing.assert_array_equal(a.weights, b.weights)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(123)
        X = rng.normal(size=(5, 3))
        y = np.array([0, 1, 2, 0, 1], dtype=np.int64)
        X_bias = np.hstack([X, np.ones((5, 1))])
        l2 = 0.1
        h = 1e-6
        for _ in range(10):
            W = rng.normal(scale=0.8, size=(3, 4))
            _, grad = softmax_loss_and_grad(W, X_bias, y, l2)
            numeric = np.zeros_like(W)
            for i in range(W.shape[0]):
                for j in range(W.shape[1]):
                    up, down = W.copy(), W.copy()
                    up[i, j] += h
                    down[i, j] -= h
                    loss_up, _ = softmax_loss_and_grad(up, X_bias, y, l2)
                    loss_down, _ = softmax_loss_and_grad(down, X_bias, y, l2)
                    numeric[i, j] = (loss_up - loss_down) / (2 * h)
            denom = np.maximum(np.abs(numeric), 1e-8)
            assert np.max(np.abs(grad - numeric) / denom) < 1e-5

    def test_dominant_l2_shrinks_weights_monotonically(self):
        # From any nonzero point, a dominating penalty (lr * l2 < 1 for
        # stability) contracts the weight norm toward 0 every epoch.
        rng = np.random.default_rng(4)
        X = rng.normal(size=(12, 2))
        y = np.array(rng.integers(0, 2, size=12), dtype=np.int64)
        X_bias = np.hstack([X, np.ones((12, 1))])
        W = rng.normal(scale=2.0, size=(2, 3))
        lr, l2 = 0.05, 15.0
        norms = [float(np.linalg.norm(W[:, :-1]))]
        for _ in range(25):
            _, grad = softmax_loss_and_grad(W, X_bias, y, l2)
            W = W - lr * grad
            norms.append(float(np.linalg.norm(W[:, :-1])))
        assert all(b < a for a, b in zip(norms, norms[1:]))
        assert norms[-1] < 0.1 * norms[0]

    def test_final_norm_monotone_in_l2(self):
        # The regularization limit: stronger penalties end at smaller weights.
        rng = np.random.default_rng(4)
        X = rng.normal(size=(12, 2))
        y = [str(v) for v in rng.integers(0, 2, size=12)]
        norms = []
        for l2 in [0.0, 0.01, 0.1, 1.0, 10.0]:
            model = logistic_train(X, y, epochs=200, learning_rate=0.05, l2=l2)
            norms.append(float(np.linalg.norm(model.weights[:, :-1])))
        assert all(b < a for a, b in zip(norms, norms[1:]))
        assert norms[-1] < 0.05


class TestLogisticRank:
    def test_zero_weights_uniform_lexicographic(self):
        from ontoclass.baselines import LogisticModel

        model = LogisticModel(dim=2, classes=["c", "a", "b"], weights=np.zeros((3, 3)))
        ranked = logistic_rank(model, [1.0, -1.0])
        assert ranked.ranked_labels == ["a", "b", "c"]
        np.testing.assert_allclose(ranked.scores, [1 / 3] * 3)

    def test_dominant_logit_first(self):
        from ontoclass.baselines import LogisticModel

        weights = np.array([[5.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        model = LogisticModel(dim=2, classes=["hot", "cold"], weights=weights)
        ranked = logistic_rank(model, [2.0, 0.0])
        assert ranked.ranked_labels[0] == "hot"

    def test_output_is_permutation_and_simplex(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(30, 4))
        y = [str(v) for v in rng.integers(0, 3, size=30)]
        model = logistic_train(X, y, epochs=50)
        for _ in range(50):
            ranked = logistic_rank(model, rng.normal(size=4))
            assert sorted(ranked.ranked_labels) == sorted(model.classes)
            assert abs(sum(ranked.scores) - 1.0) <= 1e-9

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(10, 4))
        y = ["a", "b"] * 5
        model = logistic_train(X, y, epochs=5)
        with pytest.raises(DimensionMismatch):
            logistic_rank(model, [1.0])


class TestBaselinePersistence:
    def test_centroid_round_trip(self, tmp_path):
        X = np.array([[1.0, 0.0], [3.0, 0.0], [0.0, 2.0]])
        model = centroid_train(X, ["A", "A", "B"])
        path = tmp_path / "centroid.json"
        save_centroid(model, path)
        loaded = load_centroid(path)
        assert loaded.classes == model.classes
        np.testing.assert_array_equal(loaded.centroids, model.centroids)

    def test_logistic_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(10, 2))
        y = ["a", "b"] * 5
        model = logistic_train(X, y, epochs=20)
        path = tmp_path / "logistic.json"
        save_logistic(model, path)
        loaded = load_logistic(path)
        np.testing.assert_array_equal(loaded.weights, model.weights)

    def test_kind_tags_are_distinct(self, tmp_path):
        X = np.array([[1.0], [2.0]])
        centroid = centroid_train(X, ["a", "b"])
        path = tmp_path / "model.json"
        save_centroid(centroid, path)
        with pytest.raises(CorruptModel):
            load_logistic(path)

    def test_version_checked(self, tmp_path):
        import json

        path = tmp_path / "model.json"
        path.write_text(json.dumps({"schema_version": 99, "kind": "centroid-baseline"}))
        with pytest.raises(SchemaVersionMismatch):
            load_centroid(path)
