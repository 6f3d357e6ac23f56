"""
Bench Service - metrics, synthetic streams and the end-of-stream evaluation protocol
"""

import logging
from typing import Callable, Optional, Tuple

import numpy as np
from sklearn.metrics import accuracy_score, adjusted_rand_score

from src.schemas.bench_schemas import OrderMode, SyntheticSpec
from src.schemas.report_schemas import RunMetrics
from src.utils.exceptions import MetricInputError

logger = logging.getLogger(__name__)

PredictFn = Callable[[np.ndarray], np.ndarray]


def _check_pair(a, b) -> Tuple[np.ndarray, np.ndarray]:
    a, b = np.asarray(a).ravel(), np.asarray(b).ravel()
    if a.shape[0] != b.shape[0]:
        raise MetricInputError(f"Label vectors differ in length: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] < 2:
        raise MetricInputError("Metrics need at least two samples")
    return a, b


class BenchService:
    """Service for scoring partitions and generating benchmark streams"""

    def ari(self, labels_a, labels_b) -> float:
        a, b = _check_pair(labels_a, labels_b)
        return float(adjusted_rand_score(a, b))

    def accuracy(self, pred, truth) -> Tuple[float, int]:
        """Fraction of correct predictions and the number of mistakes"""
        p, t = _check_pair(pred, truth)
        acc = float(accuracy_score(t, p))
        return acc, int(np.count_nonzero(p != t))

    def gen_synthetic(
        self, seed: int, spec: Optional[SyntheticSpec] = None
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Isotropic Gaussian clusters, samples grouped by cluster in label order"""
        spec = spec or SyntheticSpec()
        rng = np.random.default_rng(seed)
        means = np.asarray(spec.means, dtype=float)

        blocks, truth = [], []
        for c, count in enumerate(spec.counts()):
            blocks.append(means[c] + spec.sigma * rng.standard_normal((count, means.shape[1])))
            truth.append(np.full(count, c, dtype=np.int64))
        return np.vstack(blocks), np.concatenate(truth)

    def gen_embeddings(
        self,
        seed: int,
        n: int = 200,
        d: int = 32,
        classes: int = 4,
        noise: float = 0.05,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Unit-norm samples around mutually orthogonal class directions.

        Orthogonal unit directions sit at cosine distance 1 from each other, far beyond what
        the per-sample noise moves them.
        """
        if classes > d:
            raise ValueError(f"Cannot place {classes} orthogonal directions in {d} dimensions")
        rng = np.random.default_rng(seed)
        q, _ = np.linalg.qr(rng.standard_normal((d, d)))
        directions = q[:, :classes].T

        truth = np.arange(n, dtype=np.int64) % classes
        rng.shuffle(truth)
        samples = directions[truth] + noise * rng.standard_normal((n, d))
        samples /= np.linalg.norm(samples, axis=1, keepdims=True)
        return samples, truth

    def order_stream(
        self,
        samples: np.ndarray,
        truth: np.ndarray,
        mode: OrderMode,
        seed: int,
        top: Tuple[int, ...] = (0, 1),
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Permute a labeled data set into one of the presentation orders.

        class_incremental: each label a contiguous block in label order.
        mixed: the `top` clusters cluster-by-cluster, then the rest shuffled.
        random: a full seeded shuffle.
        """
        samples = np.asarray(samples)
        truth = np.asarray(truth)
        rng = np.random.default_rng(seed)
        mode = OrderMode(mode)

        if mode == OrderMode.CLASS_INCREMENTAL:
            order = np.argsort(truth, kind="stable")
        elif mode == OrderMode.MIXED:
            head = np.concatenate(
                [np.flatnonzero(truth == c) for c in top] or [np.zeros(0, dtype=np.int64)]
            )
            rest = np.flatnonzero(~np.isin(truth, list(top)))
            order = np.concatenate([head, rng.permutation(rest)]).astype(np.int64)
        else:
            order = rng.permutation(truth.shape[0])

        return samples[order], truth[order]

    def evaluate(
        self,
        predict: PredictFn,
        samples: np.ndarray,
        truth: np.ndarray,
        k_hat: int,
        n_categories: Optional[int] = None,
        supervised: bool = False,
    ) -> RunMetrics:
        """Re-present the whole data set and score it (accuracy too when supervised)"""
        predictions = predict(np.asarray(samples))
        metrics = RunMetrics(
            ari=self.ari(predictions, truth), k_hat=k_hat, P=n_categories
        )
        if supervised:
            metrics.acc, metrics.n_mis = self.accuracy(predictions, truth)
        return metrics


bench_service = BenchService()
