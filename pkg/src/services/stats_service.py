"""
Stats Service - exact incremental algebra for (n, mu, cp) summaries
"""

import logging

import numpy as np

from src.models.stats_model import ClusterStats, GrandStats
from src.utils.exceptions import DimensionMismatchError, InternalConsistencyError

logger = logging.getLogger(__name__)

SPLIT_TOLERANCE = 1e-6


def _check_dims(s: ClusterStats, x: np.ndarray) -> None:
    if x.shape != s.mu.shape:
        raise DimensionMismatchError(
            f"Expected {s.d} features, received shape {x.shape}"
        )


def init_stats(x: np.ndarray) -> ClusterStats:
    x = np.asarray(x, dtype=float)
    return ClusterStats(n=1, mu=x.copy(), cp=0.0)


def add_sample(s: ClusterStats, x: np.ndarray) -> ClusterStats:
    """Welford step; the compactness term uses the mean before the update"""
    x = np.asarray(x, dtype=float)
    _check_dims(s, x)

    delta = x - s.mu
    n_new = s.n + 1
    cp = s.cp + (s.n / n_new) * float(delta @ delta)
    mu = s.mu + delta / n_new
    return ClusterStats(n=n_new, mu=mu, cp=cp)


def grand_add(g: GrandStats, x: np.ndarray) -> GrandStats:
    return add_sample(g, x)


def merge(a: ClusterStats, b: ClusterStats) -> ClusterStats:
    """Pooled statistics of the union of two disjoint groups"""
    if a.mu.shape != b.mu.shape:
        raise DimensionMismatchError(f"Cannot merge {a.d}-d stats with {b.d}-d stats")

    n = a.n + b.n
    delta = b.mu - a.mu
    mu = (a.n * a.mu + b.n * b.mu) / n
    cp = a.cp + b.cp + (a.n * b.n / n) * float(delta @ delta)
    return ClusterStats(n=n, mu=mu, cp=cp)


def split(whole: ClusterStats, part: ClusterStats) -> ClusterStats:
    """
    Remove a previously merged group from a pooled summary.

    Exact inverse of merge. The caller deletes the cluster when the whole group leaves.
    """
    if whole.mu.shape != part.mu.shape:
        raise DimensionMismatchError(
            f"Cannot split {part.d}-d stats out of {whole.d}-d stats"
        )
    if part.n >= whole.n:
        raise InternalConsistencyError(
            f"Cannot remove {part.n} samples from a group of {whole.n}"
        )

    n = whole.n - part.n
    mu = (whole.n * whole.mu - part.n * part.mu) / n
    delta = part.mu - whole.mu
    cross = (whole.n * part.n / n) * float(delta @ delta)
    cp = whole.cp - part.cp - cross

    if cp < 0.0:
        if cp < -SPLIT_TOLERANCE * max(whole.cp, part.cp + cross):
            raise InternalConsistencyError(
                f"Split produced compactness {cp:.6g} from a group with {whole.cp:.6g}"
            )
        cp = 0.0
    if n == 1:
        cp = 0.0

    return ClusterStats(n=n, mu=mu, cp=cp)


def batch_stats(X: np.ndarray) -> ClusterStats:
    """Direct (n, mu, cp) of a sample matrix; used by the oracles"""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    mu = X.mean(axis=0)
    cp = float(((X - mu) ** 2).sum())
    return ClusterStats(n=int(X.shape[0]), mu=mu, cp=cp)
