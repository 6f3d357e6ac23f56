"""
Experiment Service - Business Logic for single runs and vigilance sweeps

A run loads or generates the data, orders the stream, trains the selected model online,
optionally scores ARI-so-far along the way and finally re-presents the whole data set.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ValidationError

from src.schemas.baseline_schemas import (
    DvfaConfig,
    ETopoFaConfig,
    NnConfig,
    SkmConfig,
    TopoFaConfig,
)
from src.schemas.bench_schemas import OrderMode
from src.schemas.config_schemas import ArtmapConfig, IcviName
from src.schemas.experiment_schemas import (
    PRESETS,
    ExperimentConfig,
    ModelName,
    Preset,
    Protocol,
)
from src.schemas.report_schemas import RunMetrics, RunResults, StepReport, SweepRow
from src.repositories.dataset_repository import get_dataset_repository
from src.services.baseline_service import baseline_service
from src.services.bench_service import bench_service
from src.services.trainer_service import trainer_service
from src.utils.exceptions import ConfigError
from src.utils.log_config import configure_logging

logger = logging.getLogger(__name__)

EXPERIMENT_FIELDS = {"seed", "order", "model", "protocol"}


# ---- model runners --------------------------------------------------------


class ModelRunner:
    """Uniform online interface over the engine and the baselines"""

    def step(self, x: np.ndarray, label: Optional[int]) -> StepReport:
        raise NotImplementedError

    def predict(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def k_hat(self) -> int:
        raise NotImplementedError

    @property
    def n_categories(self) -> Optional[int]:
        return None

    def resolved(self) -> Dict[str, Any]:
        raise NotImplementedError


class IcviRunner(ModelRunner):
    def __init__(self, config: ArtmapConfig):
        self.config = config
        self.network = trainer_service.create(config)

    def step(self, x, label):
        return trainer_service.step(self.network, x, label)

    def predict(self, X):
        return trainer_service.predict(self.network, X)

    @property
    def k_hat(self) -> int:
        return self.network.n_clusters

    @property
    def n_categories(self) -> Optional[int]:
        return self.network.n_categories

    def resolved(self):
        return self.config.model_dump(mode="json")


class _BaselineRunner(ModelRunner):
    """Baselines learn without labels; labels only matter to NN"""

    def __init__(self, config: BaseModel, model, step_fn, predict_fn, vigilance: float):
        self.config = config
        self.model = model
        self.step_fn = step_fn
        self.predict_fn = predict_fn
        self.vigilance = vigilance
        self.t = 0

    def step(self, x, label):
        self.t += 1
        cluster = self.step_fn(self.model, x)
        return StepReport(
            t=self.t,
            assigned_cluster=cluster,
            k=max(self.k_hat, 1),
            P=max(self.n_categories or 1, 1),
            rho_a=self.vigilance,
            v=0,
        )

    def predict(self, X):
        return self.predict_fn(self.model, X)

    def resolved(self):
        return self.config.model_dump(mode="json")


class SkmRunner(_BaselineRunner):
    def __init__(self, config: SkmConfig):
        super().__init__(
            config,
            baseline_service.skm_create(config),
            baseline_service.skm_step,
            baseline_service.skm_predict,
            0.0,
        )

    @property
    def k_hat(self) -> int:
        return self.model.seeded

    @property
    def n_categories(self) -> Optional[int]:
        return self.model.seeded


class DvfaRunner(_BaselineRunner):
    def __init__(self, config: DvfaConfig):
        super().__init__(
            config,
            baseline_service.dvfa_create(config),
            baseline_service.dvfa_step,
            baseline_service.dvfa_predict,
            config.rho_ub,
        )

    @property
    def k_hat(self) -> int:
        return self.model.n_clusters

    @property
    def n_categories(self) -> Optional[int]:
        return self.model.module_a.size


class TopoFaRunner(_BaselineRunner):
    def __init__(self, config: TopoFaConfig):
        super().__init__(
            config,
            baseline_service.topofa_create(config),
            baseline_service.topofa_step,
            baseline_service.topofa_predict,
            config.rho,
        )

    @property
    def k_hat(self) -> int:
        if self.model.module_a.size == 0:
            return 0
        return int(baseline_service.topofa_clusters(self.model).max()) + 1

    @property
    def n_categories(self) -> Optional[int]:
        return self.model.module_a.size


class ETopoFaRunner(_BaselineRunner):
    def __init__(self, config: ETopoFaConfig):
        super().__init__(
            config,
            baseline_service.etopofa_create(config),
            baseline_service.etopofa_step,
            baseline_service.etopofa_predict,
            config.rho,
        )

    @property
    def k_hat(self) -> int:
        return self.model.module_a.size

    @property
    def n_categories(self) -> Optional[int]:
        return self.model.module_a.size


class NnRunner(ModelRunner):
    """Registration samples become prototypes; everything else is only predicted"""

    def __init__(self, config: NnConfig):
        self.config = config
        self.prototypes: List[np.ndarray] = []
        self.labels: List[int] = []
        self.model = None
        self.t = 0

    def step(self, x, label):
        self.t += 1
        x = np.asarray(x, dtype=float).ravel()
        if label is not None:
            self.prototypes.append(x)
            self.labels.append(int(label))
            self.model = baseline_service.nn_create(
                np.vstack(self.prototypes), self.labels, self.config
            )
            cluster = int(label)
        else:
            if self.model is None:
                raise ConfigError("The NN classifier needs labeled registration samples first")
            cluster = int(baseline_service.nn_classify(self.model, x)[0])
        return StepReport(
            t=self.t,
            assigned_cluster=cluster,
            k=max(self.k_hat, 1),
            P=max(len(self.prototypes), 1),
            rho_a=0.0,
            v=0,
        )

    def predict(self, X):
        if self.model is None:
            raise ConfigError("The NN classifier has no prototypes")
        return baseline_service.nn_classify(self.model, X)

    @property
    def k_hat(self) -> int:
        return len(set(self.labels))

    @property
    def n_categories(self) -> Optional[int]:
        return len(self.prototypes)

    def resolved(self):
        return self.config.model_dump(mode="json")


def _validated(schema, params: Dict[str, Any]):
    try:
        return schema(**params)
    except ValidationError as e:
        raise ConfigError(f"Invalid {schema.__name__}: {e}")


def resolve_artmap_params(
    params: Dict[str, Any], preset: Optional[Preset], protocol: Protocol
) -> Dict[str, Any]:
    """Preset values first, explicit keys override them"""
    resolved: Dict[str, Any] = dict(PRESETS[preset]) if preset else {}
    resolved.update(params)

    icvi = str(resolved.get("icvi", IcviName.CH.value)).lower()
    if icvi == IcviName.CONN.value and preset is not None:
        if preset == Preset.SYNTHETIC_UNSUPERVISED and "rho_c" not in params:
            resolved["rho_c"] = resolved.get("rho_a", 0.0)
        if preset == Preset.EMBEDDING_UNSUPERVISED and "beta_2" not in params:
            resolved["beta_2"] = 0.6

    if protocol == Protocol.SEMI_SUPERVISED:
        resolved.setdefault("l_type", "fixed")
    return resolved


MODEL_REGISTRY: Dict[ModelName, Callable[[Dict[str, Any], ExperimentConfig], ModelRunner]] = {
    ModelName.ICVI_TOPOARTMAP: lambda params, exp: IcviRunner(
        _validated(ArtmapConfig, resolve_artmap_params(params, exp.preset, exp.protocol))
    ),
    ModelName.SKM: lambda params, exp: SkmRunner(_validated(SkmConfig, params)),
    ModelName.WS_DVFA: lambda params, exp: DvfaRunner(_validated(DvfaConfig, params)),
    ModelName.WS_TOPOFA: lambda params, exp: TopoFaRunner(_validated(TopoFaConfig, params)),
    ModelName.ETOPOFA: lambda params, exp: ETopoFaRunner(_validated(ETopoFaConfig, params)),
    ModelName.NN: lambda params, exp: NnRunner(_validated(NnConfig, params)),
}


# ---- runs -----------------------------------------------------------------


class Stream(NamedTuple):
    samples: np.ndarray
    labels: List[Optional[int]]
    truth: Optional[np.ndarray]
    eval_samples: np.ndarray
    eval_truth: Optional[np.ndarray]


@dataclass
class RunOutcome:
    results: RunResults
    trace: List[StepReport] = field(default_factory=list)


def registration_indices(truth: np.ndarray, seed: int) -> np.ndarray:
    """One randomly chosen sample per class, in ascending class order"""
    rng = np.random.default_rng(seed)
    return np.array(
        [int(rng.choice(np.flatnonzero(truth == c))) for c in np.unique(truth)],
        dtype=np.int64,
    )


class ExperimentService:
    """Service for configured runs and parameter sweeps"""

    def load_data(self, config: ExperimentConfig) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        dataset = config.dataset
        if dataset.is_synthetic:
            return bench_service.gen_synthetic(config.seed, dataset.synthetic)
        loaded = get_dataset_repository().ingest(dataset.source, dataset.has_labels)
        return loaded.samples, loaded.labels

    def build_stream(
        self, config: ExperimentConfig, samples: np.ndarray, truth: Optional[np.ndarray]
    ) -> Stream:
        if truth is None:
            if config.order != OrderMode.RANDOM:
                raise ConfigError(f"Order '{config.order.value}' needs a labeled dataset")
            if config.protocol == Protocol.SEMI_SUPERVISED:
                raise ConfigError("The semi-supervised protocol needs a labeled dataset")
            order = np.random.default_rng(config.seed).permutation(samples.shape[0])
            ordered = samples[order]
            return Stream(ordered, [None] * len(ordered), None, samples, None)

        top = tuple(config.dataset.synthetic.top) if config.dataset.is_synthetic else ()
        ordered, ordered_truth = bench_service.order_stream(
            samples, truth, config.order, config.seed, top
        )
        if config.protocol == Protocol.UNSUPERVISED:
            return Stream(ordered, [None] * len(ordered), ordered_truth, samples, truth)

        # registration samples come first; class ids become dense in registration order
        chosen = registration_indices(ordered_truth, config.seed)
        dense = {int(ordered_truth[i]): k for k, i in enumerate(chosen)}
        rest = np.setdiff1d(np.arange(ordered.shape[0]), chosen, assume_unique=True)
        stream = np.vstack([ordered[chosen], ordered[rest]])
        labels: List[Optional[int]] = [dense[int(ordered_truth[i])] for i in chosen]
        labels += [None] * len(rest)
        eval_truth = np.array([dense[int(c)] for c in ordered_truth[rest]], dtype=np.int64)
        stream_truth = np.concatenate([np.arange(len(chosen)), eval_truth]).astype(np.int64)
        return Stream(stream, labels, stream_truth, ordered[rest], eval_truth)

    def create_runner(self, config: ExperimentConfig) -> ModelRunner:
        factory = MODEL_REGISTRY.get(config.model)
        if factory is None:
            raise ConfigError(f"Unknown model '{config.model}'")
        if config.model == ModelName.NN and config.protocol != Protocol.SEMI_SUPERVISED:
            raise ConfigError("The NN classifier only runs under the semi-supervised protocol")
        return factory(dict(config.params), config)

    def run(self, config: ExperimentConfig) -> RunOutcome:
        started = time.perf_counter()
        samples, truth = self.load_data(config)
        stream = self.build_stream(config, samples, truth)
        runner = self.create_runner(config)
        logger.info(
            f"Run '{config.name}': {config.model.value} on {len(stream.samples)} samples, "
            f"order={config.order.value}, protocol={config.protocol.value}, seed={config.seed}"
        )

        trace: List[StepReport] = []
        every = config.trace_ari_every
        for t, (x, label) in enumerate(zip(stream.samples, stream.labels), start=1):
            report = runner.step(x, label)
            if every and stream.truth is not None and t >= 2:
                if t % every == 0 or t == len(stream.samples):
                    report.ari_so_far = bench_service.ari(
                        runner.predict(stream.samples[:t]), stream.truth[:t]
                    )
            trace.append(report)

        metrics = self.evaluate(runner, stream, config.protocol)
        results = RunResults(
            name=config.name,
            model=config.model.value,
            order=config.order.value,
            protocol=config.protocol.value,
            seed=config.seed,
            n_samples=len(stream.samples),
            metrics=metrics,
            runtime_s=time.perf_counter() - started,
            params={
                "model": runner.resolved(),
                "preset": config.preset.value if config.preset else None,
                "dataset": config.dataset.model_dump(mode="json"),
            },
        )
        logger.info(
            f"Run '{config.name}' finished: ari={metrics.ari}, k_hat={metrics.k_hat}, "
            f"P={metrics.P} in {results.runtime_s:.2f}s"
        )
        return RunOutcome(results=results, trace=trace)

    def evaluate(self, runner: ModelRunner, stream: Stream, protocol: Protocol) -> RunMetrics:
        if stream.eval_truth is None:
            return RunMetrics(k_hat=runner.k_hat, P=runner.n_categories)
        return bench_service.evaluate(
            runner.predict,
            stream.eval_samples,
            stream.eval_truth,
            runner.k_hat,
            runner.n_categories,
            supervised=protocol == Protocol.SEMI_SUPERVISED,
        )

    # ---- sweeps -----------------------------------------------------------

    def with_point(self, config: ExperimentConfig, point: Dict[str, Any]) -> ExperimentConfig:
        """Experiment fields in a grid point replace the experiment's, the rest are params"""
        data = config.model_dump(mode="json")
        data["sweep"] = {}
        params = dict(data["params"])
        for key, value in point.items():
            if key in EXPERIMENT_FIELDS:
                data[key] = value
            else:
                params[key] = value
        data["params"] = params
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Grid point {point} is invalid: {e}")

    def sweep(
        self, config: ExperimentConfig, workers: int = 1
    ) -> Tuple[List[SweepRow], Optional[RunResults]]:
        """Run every grid point; returns the table and the best run by ARI"""
        points = config.grid_points()
        runs = [self.with_point(config, point) for point in points]
        logger.info(f"Sweep '{config.name}': {len(runs)} grid points on {workers} workers")

        if workers > 1 and len(runs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(_run_results, runs))
        else:
            outcomes = [_run_results(run) for run in runs]

        rows = [
            SweepRow(params=point, metrics=result.metrics, runtime_s=result.runtime_s)
            for point, result in zip(points, outcomes)
        ]
        scored = [r for r in outcomes if r.metrics.ari is not None]
        best = max(scored, key=lambda r: r.metrics.ari) if scored else None
        return rows, best


def _run_results(config: ExperimentConfig) -> RunResults:
    """Process-pool entry point; workers log through their own handlers"""
    if not logging.getLogger().handlers:
        configure_logging("WARNING")
    return experiment_service.run(config).results


experiment_service = ExperimentService()
