"""
ART Service - Business Logic for Module A (enhanced topological fuzzy ART)
"""

import logging
from typing import Callable, Iterable, NamedTuple, Optional

import numpy as np

from src.models.category_model import Category, ModuleA
from src.models.range_model import RangeState
from src.schemas.config_schemas import MatchType
from src.services import geometry_service, stats_service

logger = logging.getLogger(__name__)

COSINE_ZERO_MISMATCH = 2.0


class ArtParams(NamedTuple):
    alpha: float
    match_type: MatchType
    en_tu: bool
    beta_1: float
    beta_2: float

    @classmethod
    def from_config(cls, config) -> "ArtParams":
        return cls(
            alpha=config.alpha,
            match_type=config.match_type,
            en_tu=config.en_tu,
            beta_1=config.beta_1,
            beta_2=config.beta_2,
        )


class Verdict(NamedTuple):
    """Outcome of an external acceptance test on a module A candidate"""

    accepted: bool
    rho_a: float


AcceptFn = Callable[[int, float, float], Verdict]


class SearchResult(NamedTuple):
    j1: Optional[int]
    ranking: np.ndarray
    activations: np.ndarray
    rho_a: float


class ArtService:
    """Service for module A resonance, learning and topology"""

    def activations(self, x_a: np.ndarray, weights: np.ndarray, alpha: float) -> np.ndarray:
        if weights.size == 0:
            return np.zeros(0)
        overlap = np.minimum(x_a[None, :], weights).sum(axis=1)
        return overlap / (alpha + weights.sum(axis=1))

    def activation(self, x_a: np.ndarray, w: np.ndarray, alpha: float) -> float:
        return float(np.minimum(x_a, w).sum() / (alpha + w.sum()))

    def match_fuzzy(self, x_a: np.ndarray, w: np.ndarray) -> float:
        return float(np.minimum(x_a, w).sum() / x_a.sum())

    def match_cosine(self, x_raw: np.ndarray, mu: np.ndarray) -> float:
        norm = float(np.linalg.norm(x_raw) * np.linalg.norm(mu))
        if norm == 0.0:
            return COSINE_ZERO_MISMATCH
        return float(1.0 - (x_raw @ mu) / norm)

    def passes(self, match: float, rho: float, match_type: MatchType) -> bool:
        if match_type == MatchType.COSINE:
            return match <= rho
        return match >= rho

    def match_value(
        self,
        category: Category,
        x_a: np.ndarray,
        x_raw: np.ndarray,
        match_type: MatchType,
    ) -> float:
        if match_type == MatchType.COSINE:
            return self.match_cosine(x_raw, category.stats.mu)
        return self.match_fuzzy(x_a, category.w)

    def uncommitted_threshold(self, d: int, alpha: float, en_tu: bool) -> float:
        """Activation of the all-ones uncommitted node; -1 disables the gate"""
        if not en_tu:
            return -1.0
        return d / (alpha + 2.0 * d)

    def rank(self, activations: np.ndarray) -> np.ndarray:
        # stable sort keeps the lowest index first among ties
        return np.argsort(-activations, kind="stable")

    def search(
        self,
        module_a: ModuleA,
        x_a: np.ndarray,
        x_raw: np.ndarray,
        rho_a: float,
        params: ArtParams,
        accept: Optional[AcceptFn] = None,
    ) -> SearchResult:
        activations = self.activations(x_a, module_a.weights, params.alpha)
        ranking = self.rank(activations)
        t_u = self.uncommitted_threshold(x_a.shape[0] // 2, params.alpha, params.en_tu)

        rho = rho_a
        for j in ranking:
            j = int(j)
            if activations[j] <= t_u:
                break

            m_a = self.match_value(module_a.categories[j], x_a, x_raw, params.match_type)
            if not self.passes(m_a, rho, params.match_type):
                continue

            if accept is None:
                return SearchResult(j, ranking, activations, rho)

            verdict = accept(j, m_a, rho)
            if verdict.accepted:
                return SearchResult(j, ranking, activations, rho)
            rho = verdict.rho_a

        return SearchResult(None, ranking, activations, rho)

    def choose(
        self,
        module_a: ModuleA,
        x_a: np.ndarray,
        x_raw: np.ndarray,
        rho_a: float,
        params: ArtParams,
    ) -> int:
        """Prediction-time winner: the first resonant category, else the top activation"""
        result = self.search(module_a, x_a, x_raw, rho_a, params)
        if result.j1 is not None:
            return result.j1
        return int(result.ranking[0])

    def _refresh_inactivity(self, module_a: ModuleA, j: int) -> None:
        for category in module_a.categories:
            category.inactivity += 1
        module_a.categories[j].inactivity = 0

    def learn_first(
        self,
        module_a: ModuleA,
        j1: int,
        x_a: np.ndarray,
        x_raw: np.ndarray,
        beta_1: float,
    ) -> None:
        category = module_a.categories[j1]
        category.w = (1.0 - beta_1) * category.w + beta_1 * np.minimum(x_a, category.w)
        category.stats = stats_service.add_sample(category.stats, x_raw)
        self._refresh_inactivity(module_a, j1)

    def create_category(
        self, module_a: ModuleA, x_a: np.ndarray, x_raw: np.ndarray
    ) -> int:
        module_a.categories.append(
            Category(w=np.array(x_a, dtype=float), stats=stats_service.init_stats(x_raw))
        )
        p = module_a.size
        conn = np.zeros((p, p), dtype=np.int64)
        conn[: p - 1, : p - 1] = module_a.conn
        module_a.conn = conn

        j = p - 1
        self._refresh_inactivity(module_a, j)
        logger.debug(f"Created category {j}; module A now holds {p} categories")
        return j

    def second_resonant(
        self,
        module_a: ModuleA,
        x_a: np.ndarray,
        x_raw: np.ndarray,
        j1: int,
        created_new: bool,
        result: SearchResult,
        rho_a: float,
        params: ArtParams,
    ) -> Optional[int]:
        """
        Search J2 with the baseline vigilance only and link it to J1 in CONN.

        `result` is the J1 search; when J1 was created its ranking covers exactly the
        previously existing categories.
        """
        ranking = result.ranking
        if not created_new:
            position = int(np.flatnonzero(ranking == j1)[0])
            ranking = ranking[position + 1 :]

        t_u = self.uncommitted_threshold(x_a.shape[0] // 2, params.alpha, params.en_tu)
        for j in ranking:
            j = int(j)
            if result.activations[j] <= t_u:
                break
            m_a = self.match_value(module_a.categories[j], x_a, x_raw, params.match_type)
            if not self.passes(m_a, rho_a, params.match_type):
                continue

            category = module_a.categories[j]
            category.w = (1.0 - params.beta_2) * category.w + params.beta_2 * np.minimum(
                x_a, category.w
            )
            module_a.conn[j1, j] += 1
            module_a.conn[j, j1] += 1
            return j

        return None

    def rescale(
        self, module_a: ModuleA, range_old: RangeState, range_new: RangeState
    ) -> None:
        if module_a.size == 0:
            return
        rescaled = geometry_service.rescale_weights(range_old, range_new, module_a.weights)
        for category, w in zip(module_a.categories, rescaled):
            category.w = w

    def delete_categories(self, module_a: ModuleA, doomed: Iterable[int]) -> None:
        doomed = set(doomed)
        keep = [j for j in range(module_a.size) if j not in doomed]
        module_a.categories = [module_a.categories[j] for j in keep]
        module_a.conn = module_a.conn[np.ix_(keep, keep)]


art_service = ArtService()
