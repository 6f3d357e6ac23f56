"""
Baseline Service - Business Logic for the comparison methods

skm, WS-DVFA, WS-TopoFA, E-TopoFA and the nearest-neighbour classifier. The ART-based
baselines reuse module A search, learning and weight re-scaling.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import cdist

from src.models.baseline_model import (
    DvfaModel,
    ETopoFaModel,
    NnModel,
    SkmModel,
    TopoFaModel,
)
from src.models.category_model import ModuleA
from src.models.range_model import RangeState
from src.schemas.baseline_schemas import (
    DistanceMetric,
    DvfaConfig,
    ETopoFaConfig,
    NnConfig,
    SkmConfig,
    TopoFaConfig,
)
from src.schemas.config_schemas import MatchType
from src.services import geometry_service
from src.services.art_service import ArtParams, art_service
from src.utils.exceptions import DimensionMismatchError, EmptyModelError

logger = logging.getLogger(__name__)


def _complement_coded(
    module_a: ModuleA, range_state: Optional[RangeState], x: np.ndarray
) -> Tuple[RangeState, np.ndarray]:
    """Track the range, re-scale stored weights and complement-code x"""
    range_new, expanded = geometry_service.observe(range_state, x)
    if expanded:
        art_service.rescale(module_a, range_state, range_new)
    return range_new, geometry_service.normalize_cc(range_new, x)


def _check_predict(module_a: ModuleA, range_state: Optional[RangeState], X) -> np.ndarray:
    if module_a.size == 0 or range_state is None:
        raise EmptyModelError("Cannot predict before the first sample is learned")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != range_state.d:
        raise DimensionMismatchError(
            f"Samples have {X.shape[1]} features, model was built with {range_state.d}"
        )
    return X


class BaselineService:
    """Service for the baseline online clusterers and the NN reference"""

    # ---- sequential k-means -----------------------------------------------

    def skm_create(self, config: Optional[SkmConfig] = None) -> SkmModel:
        return SkmModel(config=config or SkmConfig())

    def skm_step(self, model: SkmModel, x: np.ndarray) -> int:
        x = np.asarray(x, dtype=float).ravel()
        if model.seeded < model.config.k:
            if model.seeded == 0:
                model.centroids = x[None, :].copy()
            else:
                model.centroids = np.vstack([model.centroids, x[None, :]])
            model.counts = np.append(model.counts, 1)
            return model.seeded - 1

        c = self._nearest(model.centroids, x)
        model.counts[c] += 1
        model.centroids[c] += (x - model.centroids[c]) / model.counts[c]
        return c

    def _nearest(self, centroids: np.ndarray, x: np.ndarray) -> int:
        distances = ((centroids - x[None, :]) ** 2).sum(axis=1)
        return int(np.argmin(distances))

    def skm_predict(self, model: SkmModel, X: np.ndarray) -> np.ndarray:
        if model.seeded == 0:
            raise EmptyModelError("Cannot predict before the first sample is learned")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.argmin(cdist(X, model.centroids, metric="sqeuclidean"), axis=1)

    # ---- WS-DVFA ----------------------------------------------------------

    def dvfa_create(self, config: Optional[DvfaConfig] = None) -> DvfaModel:
        return DvfaModel(config=config or DvfaConfig())

    def _dvfa_params(self, config: DvfaConfig) -> ArtParams:
        return ArtParams(
            alpha=config.alpha,
            match_type=MatchType.FUZZY,
            en_tu=False,
            beta_1=config.beta,
            beta_2=0.0,
        )

    def dvfa_step(self, model: DvfaModel, x: np.ndarray) -> int:
        """
        Candidates are visited by activation. Passing rho_ub means resonance; passing only
        rho_lb adds a category to that candidate's cluster; failing everywhere opens a cluster.
        """
        x = np.asarray(x, dtype=float).ravel()
        config = model.config
        model.range, x_a = _complement_coded(model.module_a, model.range, x)

        activations = art_service.activations(x_a, model.module_a.weights, config.alpha)
        for j in art_service.rank(activations):
            j = int(j)
            m = art_service.match_fuzzy(x_a, model.module_a.categories[j].w)
            if m >= config.rho_ub:
                art_service.learn_first(model.module_a, j, x_a, x, config.beta)
                return model.cluster_of[j]
            if m >= config.rho_lb:
                art_service.create_category(model.module_a, x_a, x)
                model.cluster_of.append(model.cluster_of[j])
                return model.cluster_of[j]

        art_service.create_category(model.module_a, x_a, x)
        model.cluster_of.append(model.n_clusters)
        model.n_clusters += 1
        logger.debug(f"WS-DVFA opened cluster {model.n_clusters - 1}")
        return model.cluster_of[-1]

    def dvfa_predict(self, model: DvfaModel, X: np.ndarray) -> np.ndarray:
        X = _check_predict(model.module_a, model.range, X)
        params = self._dvfa_params(model.config)
        labels = np.asarray(model.cluster_of, dtype=np.int64)
        predictions = np.zeros(X.shape[0], dtype=np.int64)
        for i, x in enumerate(X):
            x_a = geometry_service.normalize_cc(model.range, x)
            j = art_service.choose(model.module_a, x_a, x, model.config.rho_lb, params)
            predictions[i] = labels[j]
        return predictions

    # ---- TopoFA family ----------------------------------------------------

    def _topo_step(
        self,
        module_a: ModuleA,
        range_state: Optional[RangeState],
        x: np.ndarray,
        rho: float,
        params: ArtParams,
    ) -> Tuple[RangeState, int]:
        range_new, x_a = _complement_coded(module_a, range_state, x)
        result = art_service.search(module_a, x_a, x, rho, params)
        if result.j1 is None:
            j1 = art_service.create_category(module_a, x_a, x)
            created = True
        else:
            j1 = result.j1
            created = False
            art_service.learn_first(module_a, j1, x_a, x, params.beta_1)
        art_service.second_resonant(module_a, x_a, x, j1, created, result, rho, params)
        return range_new, j1

    def topofa_create(self, config: Optional[TopoFaConfig] = None) -> TopoFaModel:
        return TopoFaModel(config=config or TopoFaConfig())

    def topofa_step(self, model: TopoFaModel, x: np.ndarray) -> int:
        x = np.asarray(x, dtype=float).ravel()
        config = model.config
        model.range, j1 = self._topo_step(
            model.module_a, model.range, x, config.rho, ArtParams.from_config(config)
        )
        model.t += 1
        cluster = int(self.topofa_clusters(model)[j1])
        if model.t % config.tau == 0:
            self.topofa_prune(model)
        return cluster

    def topofa_prune(self, model: TopoFaModel) -> int:
        frequencies = model.module_a.frequencies
        doomed = np.flatnonzero(frequencies < model.config.phi)
        if len(doomed) == 0 or len(doomed) == model.module_a.size:
            return 0
        art_service.delete_categories(model.module_a, doomed)
        logger.debug(f"WS-TopoFA pruned {len(doomed)} categories at t={model.t}")
        return len(doomed)

    def topofa_clusters(self, model: TopoFaModel) -> np.ndarray:
        """Connected-component label per category of the CONN > 0 graph"""
        adjacency = csr_matrix(model.module_a.conn > 0)
        _, labels = connected_components(adjacency, directed=False)
        return labels.astype(np.int64)

    def topofa_predict(self, model: TopoFaModel, X: np.ndarray) -> np.ndarray:
        X = _check_predict(model.module_a, model.range, X)
        params = ArtParams.from_config(model.config)
        labels = self.topofa_clusters(model)
        predictions = np.zeros(X.shape[0], dtype=np.int64)
        for i, x in enumerate(X):
            x_a = geometry_service.normalize_cc(model.range, x)
            predictions[i] = labels[
                art_service.choose(model.module_a, x_a, x, model.config.rho, params)
            ]
        return predictions

    def etopofa_create(self, config: Optional[ETopoFaConfig] = None) -> ETopoFaModel:
        return ETopoFaModel(config=config or ETopoFaConfig())

    def etopofa_step(self, model: ETopoFaModel, x: np.ndarray) -> int:
        x = np.asarray(x, dtype=float).ravel()
        model.range, j1 = self._topo_step(
            model.module_a,
            model.range,
            x,
            model.config.rho,
            ArtParams.from_config(model.config),
        )
        return j1

    def etopofa_predict(self, model: ETopoFaModel, X: np.ndarray) -> np.ndarray:
        X = _check_predict(model.module_a, model.range, X)
        params = ArtParams.from_config(model.config)
        predictions = np.zeros(X.shape[0], dtype=np.int64)
        for i, x in enumerate(X):
            x_a = geometry_service.normalize_cc(model.range, x)
            predictions[i] = art_service.choose(
                model.module_a, x_a, x, model.config.rho, params
            )
        return predictions

    # ---- nearest neighbour ------------------------------------------------

    def nn_create(
        self, prototypes: np.ndarray, labels, config: Optional[NnConfig] = None
    ) -> NnModel:
        prototypes = np.atleast_2d(np.asarray(prototypes, dtype=float))
        labels = np.asarray(labels, dtype=np.int64)
        if prototypes.shape[0] == 0:
            raise EmptyModelError("The NN classifier needs at least one prototype")
        if prototypes.shape[0] != labels.shape[0]:
            raise ValueError(f"{labels.shape[0]} labels for {prototypes.shape[0]} prototypes")
        metric = (config or NnConfig()).metric
        return NnModel(prototypes=prototypes, labels=labels, metric=metric)

    def nn_classify(self, model: NnModel, X: np.ndarray) -> np.ndarray:
        """Label of the nearest prototype; ties go to the lowest prototype index"""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != model.prototypes.shape[1]:
            raise DimensionMismatchError(
                f"Samples have {X.shape[1]} features, prototypes have {model.prototypes.shape[1]}"
            )
        metric = "cosine" if model.metric == DistanceMetric.COSINE else "euclidean"
        distances = cdist(X, model.prototypes, metric=metric)
        return model.labels[np.argmin(distances, axis=1)]


baseline_service = BaselineService()
