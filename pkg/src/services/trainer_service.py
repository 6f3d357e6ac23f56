"""
Trainer Service - online training loop and prediction for iCVI-TopoARTMAP

One call to `step` presents one sample: re-scaling, label matrix, resonance search with
map field vigilance, learning, iCVI commit, post-processing and the tracker update.
"""

import copy
import logging
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from src.models.category_model import ModuleA
from src.models.edit_model import Presentation
from src.models.mapfield_model import MapField
from src.models.network_model import TopoArtmapNetwork
from src.models.range_model import RangeState
from src.schemas.config_schemas import ArtmapConfig, IcviName, LearningType
from src.schemas.report_schemas import StepReport
from src.services import geometry_service
from src.services.art_service import ArtParams, art_service
from src.services.icvi_service import ConnTrial, ConnTrialFn, icvi_service
from src.services.mapfield_service import mapfield_service, one_hot
from src.services.postproc_service import postproc_service
from src.utils.exceptions import (
    DimensionMismatchError,
    EmptyModelError,
    InternalConsistencyError,
)

logger = logging.getLogger(__name__)

ORACLE_RTOL = 1e-6
ORACLE_ATOL = 1e-9

StepCallback = Callable[[StepReport], None]


class TrainerService:
    """Service for streaming iCVI-TopoARTMAP training and prediction"""

    def create(self, config: Optional[ArtmapConfig] = None) -> TopoArtmapNetwork:
        return TopoArtmapNetwork.create(config or ArtmapConfig())

    # ---- one presentation -------------------------------------------------

    def _present(
        self,
        module_a: ModuleA,
        map_field: MapField,
        x_a: np.ndarray,
        x_raw: np.ndarray,
        targets: Optional[np.ndarray],
        supervised: bool,
        rho_a: float,
        config: ArtmapConfig,
    ) -> Tuple[int, Optional[int], bool]:
        """
        Resonance search, module A learning and map field learning for one sample.

        `targets` is the label matrix Y; None disables the map field test (single cluster,
        unsupervised). Shared by real training and the virtual copies the connectivity
        index scores through.
        """
        params = ArtParams.from_config(config)
        accept = None
        if targets is not None:
            accept = mapfield_service.acceptor(
                map_field, targets, config.rho_ab, config.epsilon, config.match_type
            )
        result = art_service.search(module_a, x_a, x_raw, rho_a, params, accept)

        if result.j1 is None:
            j1 = art_service.create_category(module_a, x_a, x_raw)
            created = True
            if supervised or (targets is not None and config.l_type == LearningType.FIXED):
                y = targets[0]
            elif config.l_type == LearningType.FIXED:
                y = np.ones(map_field.n_clusters)
            else:
                y = None
            mapfield_service.expand_for_new_category(map_field, config.l_type, y)
        else:
            j1 = result.j1
            created = False
            art_service.learn_first(module_a, j1, x_a, x_raw, config.beta_1)
            if targets is None:
                target = np.ones(map_field.n_clusters)
            else:
                _, row = mapfield_service.match(map_field, j1, targets)
                target = targets[row]
            # rows stay one-hot, so learning never moves a committed category
            mapfield_service.learn(map_field, j1, target, config.beta_ab)

        j2 = art_service.second_resonant(
            module_a, x_a, x_raw, j1, created, result, config.rho_a, params
        )
        return j1, j2, created

    def _conn_trial(
        self, network: TopoArtmapNetwork, x_a: np.ndarray, x_raw: np.ndarray
    ) -> ConnTrialFn:
        def trial(c: int) -> ConnTrial:
            module_a = copy.deepcopy(network.module_a)
            map_field = copy.deepcopy(network.map_field)
            targets = one_hot(map_field.n_clusters, c)[None, :]
            j1, j2, created = self._present(
                module_a,
                map_field,
                x_a,
                x_raw,
                targets,
                True,
                network.rho_a,
                network.config,
            )
            return ConnTrial(j1, j2, created, map_field.cluster_of(j1))

        return trial

    def _targets(
        self,
        network: TopoArtmapNetwork,
        x_a: np.ndarray,
        x_raw: np.ndarray,
        label: Optional[int],
    ) -> Tuple[Optional[np.ndarray], bool]:
        if label is not None:
            mapfield_service.register_label(network.map_field, label, network.config.l_type)
            return one_hot(network.map_field.n_clusters, label)[None, :], True

        if network.icvi.k < 2:
            return None, False

        conn_trial = None
        if network.icvi.which == IcviName.CONN:
            conn_trial = self._conn_trial(network, x_a, x_raw)
        scores = icvi_service.score_assignments(network.icvi, x_raw, conn_trial)
        return icvi_service.label_matrix(scores), False

    def _drop_unused_clusters(self, network: TopoArtmapNetwork) -> None:
        """A registered label whose sample resonated elsewhere leaves an empty column"""
        map_field = network.map_field
        used = np.unique(map_field.labels())
        if len(used) < map_field.n_clusters:
            map_field.w_ab = map_field.w_ab[:, used]

    def _initialize(
        self, network: TopoArtmapNetwork, x: np.ndarray, label: Optional[int]
    ) -> StepReport:
        if label not in (None, 0):
            raise ValueError(f"The first sample opens cluster 0, got label {label}")

        network.t = 1
        network.range = RangeState.from_sample(x)
        x_a = geometry_service.normalize_cc(network.range, x)
        art_service.create_category(network.module_a, x_a, x)
        mapfield_service.initialize(network.map_field)
        icvi_service.initialize(network.icvi, x)
        if network.history is not None:
            network.history.samples.append(x.copy())
            network.history.categories.append(0)

        logger.debug(f"Initialized network on a {x.shape[0]}-feature sample")
        return self._report(network, Presentation(0, None, True, 0))

    def step(
        self,
        network: TopoArtmapNetwork,
        x: np.ndarray,
        label: Optional[int] = None,
    ) -> StepReport:
        """Present one sample, optionally with a supervised dense cluster label"""
        x = np.asarray(x, dtype=float).ravel()
        if network.t == 0:
            return self._initialize(network, x, label)
        if x.shape[0] != network.range.d:
            raise DimensionMismatchError(
                f"Sample has {x.shape[0]} features, network was built with {network.range.d}"
            )

        config = network.config
        network.t += 1

        range_new, expanded = geometry_service.observe(network.range, x)
        if expanded:
            art_service.rescale(network.module_a, network.range, range_new)
            network.range = range_new
        x_a = geometry_service.normalize_cc(network.range, x)

        value_start = network.icvi.value
        targets, supervised = self._targets(network, x_a, x, label)
        if targets is not None and not supervised and config.en_mt_icvi:
            network.rho_a = icvi_service.match_tracking(network.icvi, network.rho_a, config)

        j1, j2, created = self._present(
            network.module_a,
            network.map_field,
            x_a,
            x,
            targets,
            supervised,
            network.rho_a,
            config,
        )
        if network.map_field.n_clusters > network.icvi.k:
            self._drop_unused_clusters(network)

        presentation = Presentation(j1, j2, created, network.map_field.cluster_of(j1))
        icvi_service.commit(network.icvi, x, presentation)
        if network.history is not None:
            network.history.samples.append(x.copy())
            network.history.categories.append(j1)

        postproc_service.run(network)

        icvi_service.tracker_update(network.icvi, value_start, network.icvi.value)
        if network.icvi.v < config.tau:
            network.rho_a = config.rho_a

        if config.oracle_checks:
            self.check_oracle(network)

        return self._report(network, presentation)

    def _report(self, network: TopoArtmapNetwork, presentation: Presentation) -> StepReport:
        """The assigned cluster is the one the sample was committed to, before post-processing"""
        return StepReport(
            t=network.t,
            assigned_cluster=presentation.cluster,
            k=network.n_clusters,
            P=network.n_categories,
            rho_a=network.rho_a,
            v=network.icvi.v,
            icvi_value=network.icvi.value,
        )

    def run_stream(
        self,
        network: TopoArtmapNetwork,
        samples: Iterable[np.ndarray],
        labels: Optional[Iterable[Optional[int]]] = None,
        on_step: Optional[StepCallback] = None,
    ) -> List[StepReport]:
        samples = list(samples)
        labels = [None] * len(samples) if labels is None else list(labels)
        if len(labels) != len(samples):
            raise ValueError(f"{len(labels)} labels for {len(samples)} samples")

        reports = []
        for x, label in zip(samples, labels):
            report = self.step(network, x, label)
            if on_step is not None:
                on_step(report)
            reports.append(report)
        return reports

    # ---- prediction -------------------------------------------------------

    def predict(self, network: TopoArtmapNetwork, X: np.ndarray) -> np.ndarray:
        """Cluster id per row of X; the model is not modified"""
        if network.module_a.size == 0 or network.range is None:
            raise EmptyModelError("Cannot predict before the first sample is learned")

        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != network.range.d:
            raise DimensionMismatchError(
                f"Samples have {X.shape[1]} features, network was built with {network.range.d}"
            )

        params = ArtParams.from_config(network.config)
        labels = network.map_field.labels()
        predictions = np.zeros(X.shape[0], dtype=np.int64)
        for i, x in enumerate(X):
            x_a = geometry_service.normalize_cc(network.range, x)
            j = art_service.choose(network.module_a, x_a, x, network.config.rho_a, params)
            predictions[i] = labels[j]
        return predictions

    # ---- oracle mode ------------------------------------------------------

    def check_oracle(self, network: TopoArtmapNetwork) -> None:
        """Compare the incremental state against a from-scratch recomputation"""
        state, history = network.icvi, network.history
        if history is None:
            raise InternalConsistencyError("Oracle checks need the retained sample history")

        labels = network.map_field.labels()
        if not np.array_equal(labels, state.proto_labels):
            raise InternalConsistencyError("Prototype labels drifted from the map field")
        if int(network.module_a.frequencies.sum()) != network.t:
            raise InternalConsistencyError(
                f"Category frequencies sum to {network.module_a.frequencies.sum()}, t={network.t}"
            )

        if state.which == IcviName.CONN:
            expected = icvi_service.batch_conn_index(network.module_a.conn, labels)
        else:
            sample_clusters = labels[np.asarray(history.categories, dtype=np.int64)]
            expected = icvi_service.batch_index_value(
                state.which, np.vstack(history.samples), sample_clusters
            )

        actual = state.value
        if actual is None and expected is None:
            return
        if actual is None or expected is None or not np.isclose(
            actual, expected, rtol=ORACLE_RTOL, atol=ORACLE_ATOL
        ):
            raise InternalConsistencyError(
                f"Incremental {state.which.value}={actual} but batch value is {expected} "
                f"at t={network.t}"
            )


trainer_service = TrainerService()
