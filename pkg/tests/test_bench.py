import numpy as np
import pytest

from src.schemas.bench_schemas import OrderMode, SyntheticSpec
from src.services.bench_service import bench_service
from src.utils.exceptions import MetricInputError


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ([0, 0, 1, 1], [1, 1, 0, 0], 1.0),
        ([0, 0, 1, 1], [0, 1, 0, 1], -0.5),
    ],
)
def test_ari_examples(a, b, expected):
    assert bench_service.ari(a, b) == pytest.approx(expected)


def test_ari_of_labels_with_themselves():
    labels = np.random.default_rng(4).integers(0, 5, size=50)
    assert bench_service.ari(labels, labels) == pytest.approx(1.0)


def test_ari_rejects_bad_inputs():
    with pytest.raises(MetricInputError):
        bench_service.ari([0, 1], [0, 1, 1])
    with pytest.raises(MetricInputError):
        bench_service.ari([0], [0])


def test_accuracy_counts_mistakes():
    truth = np.zeros(1590, dtype=np.int64)
    pred = truth.copy()
    pred[:10] = 1
    acc, n_mis = bench_service.accuracy(pred, truth)
    assert acc == pytest.approx(0.99371, abs=1e-5)
    assert n_mis == 10
    assert bench_service.accuracy([1, 1], [0, 0]) == (0.0, 2)


def test_default_synthetic_layout():
    X, truth = bench_service.gen_synthetic(seed=0)
    assert X.shape == (1600, 2)
    assert len(np.unique(truth)) == 7
    assert np.bincount(truth).tolist() == [229] * 4 + [228] * 3


def test_synthetic_is_seed_deterministic():
    spec = SyntheticSpec(n_samples=70)
    a, _ = bench_service.gen_synthetic(3, spec)
    b, _ = bench_service.gen_synthetic(3, spec)
    c, _ = bench_service.gen_synthetic(4, spec)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_synthetic_spec_rejects_bad_layouts():
    with pytest.raises(ValueError):
        SyntheticSpec(means=[[0.0, 0.0], [1.0]])
    with pytest.raises(ValueError):
        SyntheticSpec(n_samples=3)
    with pytest.raises(ValueError):
        SyntheticSpec(top=[9])


def test_embeddings_are_unit_norm():
    X, truth = bench_service.gen_embeddings(seed=1)
    assert X.shape == (200, 32)
    np.testing.assert_allclose(np.linalg.norm(X, axis=1), 1.0)
    assert np.bincount(truth).tolist() == [50] * 4


def test_class_incremental_order_is_blocked():
    X, truth = bench_service.gen_synthetic(0, SyntheticSpec(n_samples=70))
    rng = np.random.default_rng(2)
    shuffled = rng.permutation(70)
    _, ordered = bench_service.order_stream(X[shuffled], truth[shuffled], OrderMode.CLASS_INCREMENTAL, 0)
    assert np.all(np.diff(ordered) >= 0)


def test_mixed_order_keeps_top_clusters_first():
    X, truth = bench_service.gen_synthetic(0, SyntheticSpec(n_samples=70))
    samples, ordered = bench_service.order_stream(X, truth, OrderMode.MIXED, seed=5)

    assert ordered[:10].tolist() == [0] * 10
    assert ordered[10:20].tolist() == [1] * 10
    rest = ordered[20:]
    assert set(rest.tolist()) == {2, 3, 4, 5, 6}
    assert np.any(np.diff(rest) < 0)
    assert samples.shape == X.shape


def test_random_order_is_seeded_permutation():
    X, truth = bench_service.gen_synthetic(0, SyntheticSpec(n_samples=70))
    a_samples, a_truth = bench_service.order_stream(X, truth, "random", seed=9)
    b_samples, _ = bench_service.order_stream(X, truth, "random", seed=9)
    np.testing.assert_array_equal(a_samples, b_samples)
    assert sorted(a_truth.tolist()) == sorted(truth.tolist())


def test_evaluate_scores_predictions():
    truth = np.array([0, 0, 1, 1])
    metrics = bench_service.evaluate(lambda X: truth.copy(), np.zeros((4, 1)), truth, k_hat=2, n_categories=3)
    assert metrics.ari == pytest.approx(1.0)
    assert metrics.acc is None
    assert (metrics.k_hat, metrics.P) == (2, 3)


def test_evaluate_constant_prediction_and_accuracy():
    truth = np.array([0, 0, 1, 1])
    metrics = bench_service.evaluate(
        lambda X: np.zeros(4, dtype=np.int64), np.zeros((4, 1)), truth, k_hat=1, supervised=True
    )
    assert metrics.ari == pytest.approx(0.0)
    assert metrics.acc == pytest.approx(0.5)
    assert metrics.n_mis == 2
