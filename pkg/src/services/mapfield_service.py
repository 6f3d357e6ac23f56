"""
Map Field Service - Business Logic for category-to-cluster association
"""

import logging
from typing import Optional, Tuple

import numpy as np

from src.models.edit_model import Edit, MergeEdit, MoveEdit
from src.models.mapfield_model import MapField
from src.schemas.config_schemas import LearningType, MatchType
from src.services.art_service import AcceptFn, Verdict

logger = logging.getLogger(__name__)


def one_hot(k: int, c: int) -> np.ndarray:
    y = np.zeros(k)
    y[c] = 1.0
    return y


class MapFieldService:
    """Service for map field vigilance, match tracking and learning"""

    def initialize(self, map_field: MapField) -> None:
        map_field.w_ab = np.ones((1, 1))

    def match(self, map_field: MapField, j: int, targets: np.ndarray) -> Tuple[float, int]:
        """Effective match of row j against every target row; ties go to the lowest row"""
        targets = np.atleast_2d(targets)
        row = map_field.w_ab[j]
        values = np.minimum(targets, row[None, :]).sum(axis=1) / targets.sum(axis=1)
        best = int(np.argmax(values))
        return float(values[best]), best

    def vigilance_and_track(
        self,
        m_ab: float,
        m_a: float,
        rho_a: float,
        rho_ab: float,
        epsilon: float,
        match_type: MatchType,
    ) -> Verdict:
        if m_ab >= rho_ab:
            return Verdict(True, rho_a)

        if match_type == MatchType.COSINE:
            tracked = min(max(m_a - epsilon, 0.0), 2.0)
        else:
            tracked = max(min(m_a + epsilon, 1.0), 0.0)
        logger.debug(f"Map field mismatch ({m_ab:.3f} < {rho_ab}); rho_a -> {tracked:.4f}")
        return Verdict(False, tracked)

    def acceptor(
        self,
        map_field: MapField,
        targets: np.ndarray,
        rho_ab: float,
        epsilon: float,
        match_type: MatchType,
    ) -> AcceptFn:
        def accept(j: int, m_a: float, rho_a: float) -> Verdict:
            m_ab, _ = self.match(map_field, j, targets)
            return self.vigilance_and_track(m_ab, m_a, rho_a, rho_ab, epsilon, match_type)

        return accept

    def learn(
        self, map_field: MapField, j: int, target: np.ndarray, beta_ab: float
    ) -> None:
        row = map_field.w_ab[j]
        learned = (1.0 - beta_ab) * row + beta_ab * np.minimum(target, row)
        if learned.sum() <= 0.0:
            logger.debug(f"Map field row {j} would lose all mass; left unchanged")
            return
        map_field.w_ab[j] = learned

    def add_cluster(self, map_field: MapField) -> int:
        rows = map_field.n_categories
        map_field.w_ab = np.hstack([map_field.w_ab, np.zeros((rows, 1))])
        return map_field.n_clusters - 1

    def register_label(self, map_field: MapField, label: int, l_type: LearningType) -> None:
        """Supervised labels are dense cluster ids; label == k opens the next cluster"""
        k = map_field.n_clusters
        if label < k:
            return
        if label > k:
            raise ValueError(f"Label {label} skips cluster ids; the next new id is {k}")
        if l_type == LearningType.FIXED:
            logger.warning(f"Supervised label {label} grows the fixed cluster set to {k + 1}")
        self.add_cluster(map_field)

    def expand_for_new_category(
        self,
        map_field: MapField,
        l_type: LearningType,
        y: Optional[np.ndarray] = None,
    ) -> None:
        """
        Append the row of a freshly created module A category.

        Variable mode without a target opens a new cluster for it; otherwise the row is y.
        """
        if y is None:
            if l_type == LearningType.FIXED:
                raise ValueError("Fixed map field learning needs a target for new categories")
            new_cluster = self.add_cluster(map_field)
            row = one_hot(map_field.n_clusters, new_cluster)
        else:
            row = np.asarray(y, dtype=float)

        map_field.w_ab = np.vstack([map_field.w_ab, row[None, :]])

    def _drop_if_empty(self, map_field: MapField, c: int) -> bool:
        if np.any(map_field.labels() == c):
            return False
        map_field.w_ab = np.delete(map_field.w_ab, c, axis=1)
        return True

    def apply_edit(self, map_field: MapField, edit: Edit) -> None:
        if isinstance(edit, MoveEdit):
            source = map_field.cluster_of(edit.category)
            if edit.target == map_field.n_clusters:
                self.add_cluster(map_field)
            map_field.w_ab[edit.category] = one_hot(map_field.n_clusters, edit.target)
            self._drop_if_empty(map_field, source)
            return

        keep, absorb = sorted((edit.keep, edit.absorb))
        labels = map_field.labels()
        for j in np.flatnonzero(labels == absorb):
            map_field.w_ab[j] = one_hot(map_field.n_clusters, keep)
        map_field.w_ab = np.delete(map_field.w_ab, absorb, axis=1)

    def replace(self, map_field: MapField, labels: np.ndarray, k: int) -> None:
        map_field.w_ab = np.zeros((len(labels), k))
        map_field.w_ab[np.arange(len(labels)), labels] = 1.0


mapfield_service = MapFieldService()
