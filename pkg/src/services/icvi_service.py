"""
iCVI Service - Business Logic for the online cluster-validity-index framework

Sum-of-squares indices (CH, WB, PBM, XB, DB) are computed from per-cluster (n, mu, cp)
tables plus the whole-data statistics. The connectivity index reads CONN through a cached
prototype-by-cluster mass matrix so relabels and new links only touch a few entries.
"""

import logging
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from src.models.category_model import ModuleA
from src.models.edit_model import Edit, MergeEdit, MoveEdit, Presentation
from src.models.icvi_model import IcviState
from src.models.stats_model import ClusterStats
from src.schemas.config_schemas import ArtmapConfig, IcviName, MatchType
from src.services import stats_service
from src.utils.exceptions import IndexUndefinedError

logger = logging.getLogger(__name__)

DISTANCE_FLOOR = 1e-12
SCATTER_FLOOR = 1e-12
IMPROVEMENT_RTOL = 1e-12
TIE_RTOL = 1e-12


class ConnTrial(NamedTuple):
    """Outcome of training a virtual copy of module A and the map field on one label"""

    j1: int
    j2: Optional[int]
    created_category: bool
    label: int


ConnTrialFn = Callable[[int], ConnTrial]


def _ss_value(
    which: IcviName,
    n: np.ndarray,
    mu: np.ndarray,
    cp: np.ndarray,
    grand_mu: np.ndarray,
    grand_cp: float,
    d2: np.ndarray,
) -> float:
    k = n.shape[0]
    total = float(n.sum())
    ss_w = float(cp.sum())

    if which in (IcviName.CH, IcviName.WB):
        ss_b = float((n * ((mu - grand_mu[None, :]) ** 2).sum(axis=1)).sum())
        if which == IcviName.CH:
            if total - k <= 0:
                return 0.0
            return (ss_b / (k - 1)) / (max(ss_w, SCATTER_FLOOR) / (total - k))
        return k * ss_w / max(ss_b, SCATTER_FLOOR)

    off_diagonal = ~np.eye(k, dtype=bool)
    distances = np.sqrt(np.maximum(d2, 0.0))
    if np.any(distances[off_diagonal] < DISTANCE_FLOOR):
        logger.warning("Duplicate cluster centroids; pair distance floored at 1e-12")
        distances = np.where(off_diagonal, np.maximum(distances, DISTANCE_FLOOR), 0.0)

    if which == IcviName.XB:
        d_min = float(distances[off_diagonal].min())
        return ss_w / (total * d_min**2)

    if which == IcviName.DB:
        scatter = np.sqrt(cp / n)
        ratios = (scatter[:, None] + scatter[None, :]) / np.where(off_diagonal, distances, 1.0)
        ratios[~off_diagonal] = -np.inf
        return float(ratios.max(axis=1).mean())

    d_max = float(distances[off_diagonal].max())
    return ((1.0 / k) * (grand_cp / max(ss_w, SCATTER_FLOOR)) * d_max) ** 2


def _conn_value(
    conn_mass: np.ndarray, rowsum: np.ndarray, labels: np.ndarray, k: int
) -> float:
    members = (labels[:, None] == np.arange(k)[None, :]).astype(float)

    cluster_total = members.T @ rowsum
    within = (conn_mass * members).sum(axis=0)
    intra_terms = np.divide(
        within, cluster_total, out=np.zeros(k), where=cluster_total > 0
    )
    intra = float(intra_terms.mean())

    between = members.T @ conn_mass
    boundary_total = members.T @ ((conn_mass > 0) * rowsum[:, None])
    ratios = np.divide(
        between, boundary_total, out=np.zeros((k, k)), where=boundary_total > 0
    )
    np.fill_diagonal(ratios, 0.0)
    inter = float(ratios.max(axis=1).mean())

    return intra * (1.0 - inter)


class IcviService:
    """Service for incremental validity-index bookkeeping"""

    # ---- index evaluation -------------------------------------------------

    def compute(self, state: IcviState) -> Optional[float]:
        if state.k < 2:
            return None
        if state.which == IcviName.CONN:
            return _conn_value(
                state.conn_mass, state.conn_rowsum, state.proto_labels, state.k
            )
        return _ss_value(
            state.which,
            state.n.astype(float),
            state.mu,
            state.cp,
            state.grand.mu,
            state.grand.cp,
            state.d2,
        )

    def value(self, state: IcviState) -> float:
        if state.value is None:
            raise IndexUndefinedError(
                f"{state.which.value} needs at least two clusters, have {state.k}"
            )
        return state.value

    def signed(self, state: IcviState, value: float) -> float:
        """Orient a raw value so that larger is always better"""
        return -value if state.min_optimal else value

    def is_better(
        self, state: IcviState, candidate: Optional[float], reference: Optional[float]
    ) -> bool:
        if candidate is None:
            return False
        if reference is None:
            return True
        a, b = self.signed(state, candidate), self.signed(state, reference)
        return a > b + IMPROVEMENT_RTOL * abs(b)

    # ---- cache maintenance ------------------------------------------------

    def _refresh_distances(self, state: IcviState, i: int) -> None:
        row = ((state.mu - state.mu[i][None, :]) ** 2).sum(axis=1)
        state.d2[i, :] = row
        state.d2[:, i] = row

    def _set_cluster(self, state: IcviState, i: int, stats: ClusterStats) -> None:
        state.n[i] = stats.n
        state.mu[i] = stats.mu
        state.cp[i] = stats.cp
        self._refresh_distances(state, i)

    def _append_cluster(self, state: IcviState, stats: ClusterStats) -> int:
        k = state.k
        state.n = np.append(state.n, stats.n)
        state.mu = np.vstack([state.mu, stats.mu[None, :]])
        state.cp = np.append(state.cp, stats.cp)
        d2 = np.zeros((k + 1, k + 1))
        d2[:k, :k] = state.d2
        state.d2 = d2
        self._refresh_distances(state, k)

        rows = state.n_prototypes
        state.conn_mass = np.hstack([state.conn_mass, np.zeros((rows, 1))])
        return k

    def _delete_cluster(self, state: IcviState, c: int) -> None:
        state.n = np.delete(state.n, c)
        state.mu = np.delete(state.mu, c, axis=0)
        state.cp = np.delete(state.cp, c)
        state.d2 = np.delete(np.delete(state.d2, c, axis=0), c, axis=1)
        state.conn_mass = np.delete(state.conn_mass, c, axis=1)
        state.proto_labels = np.where(
            state.proto_labels > c, state.proto_labels - 1, state.proto_labels
        )

    def _add_prototype(self, state: IcviState, label: int) -> None:
        state.proto_labels = np.append(state.proto_labels, label)
        state.proto_counts = np.append(state.proto_counts, 0)
        state.conn_mass = np.vstack([state.conn_mass, np.zeros((1, state.k))])
        state.conn_rowsum = np.append(state.conn_rowsum, 0.0)

    def _link(self, state: IcviState, j1: int, j2: int) -> None:
        state.conn_mass[j1, state.proto_labels[j2]] += 1.0
        state.conn_mass[j2, state.proto_labels[j1]] += 1.0
        state.conn_rowsum[j1] += 1.0
        state.conn_rowsum[j2] += 1.0

    def _relabel(self, state: IcviState, p: int, target: int, conn_column: np.ndarray) -> None:
        source = state.proto_labels[p]
        state.conn_mass[:, source] -= conn_column
        state.conn_mass[:, target] += conn_column
        state.proto_labels[p] = target

    def resync_prototypes(
        self,
        state: IcviState,
        conn: np.ndarray,
        labels: np.ndarray,
        counts: np.ndarray,
    ) -> None:
        """Rebuild the prototype tables from scratch after module A is rewritten"""
        members = (labels[:, None] == np.arange(state.k)[None, :]).astype(float)
        state.proto_labels = np.asarray(labels, dtype=np.int64).copy()
        state.proto_counts = np.asarray(counts, dtype=np.int64).copy()
        state.conn_mass = conn.astype(float) @ members
        state.conn_rowsum = conn.sum(axis=1).astype(float)
        state.value = self.compute(state)

    # ---- operations -------------------------------------------------------

    def initialize(self, state: IcviState, x_raw: np.ndarray) -> None:
        first = stats_service.init_stats(x_raw)
        state.n = np.zeros(0, dtype=np.int64)
        state.mu = np.zeros((0, first.d))
        state.cp = np.zeros(0)
        state.d2 = np.zeros((0, 0))
        state.conn_mass = np.zeros((0, 0))
        state.conn_rowsum = np.zeros(0)
        state.proto_labels = np.zeros(0, dtype=np.int64)
        state.proto_counts = np.zeros(0, dtype=np.int64)

        self._append_cluster(state, first)
        self._add_prototype(state, 0)
        state.proto_counts[0] = 1
        state.grand = first.copy()
        state.value = None
        state.v = 0

    def score_assignments(
        self,
        state: IcviState,
        x_raw: np.ndarray,
        conn_trial: Optional[ConnTrialFn] = None,
    ) -> np.ndarray:
        """
        Temporary index value (negated when min-optimal) for adding x to each cluster.

        The state is left untouched. The connectivity index needs `conn_trial`, which
        trains a virtual copy of module A and the map field on one label.
        """
        if state.k < 2:
            raise IndexUndefinedError("Assignment scoring needs at least two clusters")

        x_raw = np.asarray(x_raw, dtype=float)
        scores = np.zeros(state.k)

        if state.which == IcviName.CONN:
            if conn_trial is None:
                raise ValueError("The connectivity index scores through virtual training")
            for c in range(state.k):
                trial_state = self._conn_copy(state)
                self._apply_conn_presentation(trial_state, conn_trial(c))
                scores[c] = _conn_value(
                    trial_state.conn_mass,
                    trial_state.conn_rowsum,
                    trial_state.proto_labels,
                    trial_state.k,
                )
            return scores

        grand = stats_service.grand_add(state.grand, x_raw)
        for c in range(state.k):
            hypothetical = stats_service.add_sample(state.cluster_stats(c), x_raw)
            mu = state.mu.copy()
            mu[c] = hypothetical.mu
            n = state.n.astype(float).copy()
            n[c] = hypothetical.n
            cp = state.cp.copy()
            cp[c] = hypothetical.cp
            d2 = state.d2.copy()
            row = ((mu - mu[c][None, :]) ** 2).sum(axis=1)
            d2[c, :] = row
            d2[:, c] = row
            value = _ss_value(state.which, n, mu, cp, grand.mu, grand.cp, d2)
            scores[c] = self.signed(state, value)

        return scores

    def _conn_copy(self, state: IcviState) -> IcviState:
        return IcviState(
            which=state.which,
            n=state.n,
            proto_labels=state.proto_labels.copy(),
            proto_counts=state.proto_counts.copy(),
            conn_mass=state.conn_mass.copy(),
            conn_rowsum=state.conn_rowsum.copy(),
        )

    def _apply_conn_presentation(self, state: IcviState, trial: ConnTrial) -> None:
        if trial.created_category:
            self._add_prototype(state, trial.label)
        if trial.j2 is not None:
            self._link(state, trial.j1, trial.j2)

    def label_matrix(self, scores: np.ndarray) -> np.ndarray:
        best = float(np.max(scores))
        winners = np.flatnonzero(np.isclose(scores, best, rtol=TIE_RTOL, atol=0.0))
        matrix = np.zeros((len(winners), len(scores)))
        matrix[np.arange(len(winners)), winners] = 1.0
        return matrix

    def commit(
        self,
        state: IcviState,
        x_raw: np.ndarray,
        presentation: Presentation,
    ) -> None:
        """Fold one sample into the cluster its resonant category maps to"""
        x_raw = np.asarray(x_raw, dtype=float)
        c = presentation.cluster

        if c == state.k:
            self._append_cluster(state, stats_service.init_stats(x_raw))
        else:
            self._set_cluster(
                state, c, stats_service.add_sample(state.cluster_stats(c), x_raw)
            )
        state.grand = stats_service.grand_add(state.grand, x_raw)

        if presentation.created_category:
            self._add_prototype(state, c)
        state.proto_counts[presentation.j1] += 1
        if presentation.j2 is not None:
            self._link(state, presentation.j1, presentation.j2)

        state.value = self.compute(state)

    def match_tracking(
        self, state: IcviState, rho_a: float, config: ArtmapConfig
    ) -> float:
        """Raise (fuzzy) or lower (cosine) vigilance while the index keeps worsening"""
        if state.v < config.tau:
            return config.rho_a

        step = config.icvi_step
        if config.match_type == MatchType.COSINE:
            return min(max(rho_a - step, config.rho_mt_icvi), 2.0)
        return max(min(rho_a + step, config.rho_mt_icvi), 0.0)

    def tracker_update(
        self,
        state: IcviState,
        value_start: Optional[float],
        value_end: Optional[float],
    ) -> None:
        if value_start is None or value_end is None:
            return
        worse = self.signed(state, value_end) < self.signed(state, value_start)
        state.v = state.v + 1 if worse else max(0, state.v - 1)

    def restructure(self, state: IcviState, edit: Edit, module_a: ModuleA) -> None:
        if isinstance(edit, MoveEdit):
            self._move(state, edit, module_a)
        else:
            self._merge(state, edit)
        state.value = self.compute(state)

    def _move(self, state: IcviState, edit: MoveEdit, module_a: ModuleA) -> None:
        p = edit.category
        source = int(state.proto_labels[p])
        if edit.target == source:
            return

        part = module_a.categories[p].stats
        if edit.target == state.k:
            self._append_cluster(state, part.copy())
        else:
            self._set_cluster(
                state,
                edit.target,
                stats_service.merge(state.cluster_stats(edit.target), part),
            )

        emptied = part.n >= state.n[source]
        if not emptied:
            self._set_cluster(
                state, source, stats_service.split(state.cluster_stats(source), part)
            )

        self._relabel(state, p, edit.target, module_a.conn[:, p].astype(float))
        if emptied:
            self._delete_cluster(state, source)

    def _merge(self, state: IcviState, edit: MergeEdit) -> None:
        keep, absorb = sorted((edit.keep, edit.absorb))
        self._set_cluster(
            state,
            keep,
            stats_service.merge(state.cluster_stats(keep), state.cluster_stats(absorb)),
        )
        state.conn_mass[:, keep] += state.conn_mass[:, absorb]
        state.proto_labels = np.where(
            state.proto_labels == absorb, keep, state.proto_labels
        )
        self._delete_cluster(state, absorb)

    def preview(
        self, state: IcviState, edits: Sequence[Edit], module_a: ModuleA
    ) -> Optional[float]:
        trial = state.clone()
        for edit in edits:
            self.restructure(trial, edit, module_a)
        return trial.value

    # ---- batch oracles ----------------------------------------------------

    def batch_index_value(
        self, which: IcviName, X: np.ndarray, labels: np.ndarray
    ) -> Optional[float]:
        """Index value recomputed from raw samples; None with fewer than two clusters"""
        if which == IcviName.CONN:
            raise ValueError("Use batch_conn_index for the connectivity index")

        X = np.atleast_2d(np.asarray(X, dtype=float))
        labels = np.asarray(labels)
        clusters = np.unique(labels)
        if len(clusters) < 2:
            return None

        groups: List[ClusterStats] = [
            stats_service.batch_stats(X[labels == c]) for c in clusters
        ]
        n = np.array([g.n for g in groups], dtype=float)
        mu = np.vstack([g.mu for g in groups])
        cp = np.array([g.cp for g in groups])
        grand = stats_service.batch_stats(X)
        d2 = cdist(mu, mu, metric="sqeuclidean")
        return _ss_value(which, n, mu, cp, grand.mu, grand.cp, d2)

    def batch_conn_index(self, conn: np.ndarray, labels: np.ndarray) -> Optional[float]:
        labels = np.asarray(labels, dtype=np.int64)
        clusters, dense = np.unique(labels, return_inverse=True)
        k = len(clusters)
        if k < 2:
            return None
        members = (dense[:, None] == np.arange(k)[None, :]).astype(float)
        conn = np.asarray(conn, dtype=float)
        return _conn_value(conn @ members, conn.sum(axis=1), dense, k)


icvi_service = IcviService()
