import numpy as np
import pytest

from src.schemas.bench_schemas import SyntheticSpec
from src.schemas.experiment_schemas import DatasetConfig, ExperimentConfig, Preset, Protocol
from src.services.bench_service import bench_service
from src.services.experiment_service import (
    ExperimentService,
    registration_indices,
    resolve_artmap_params,
)
from src.utils.exceptions import ConfigError

service = ExperimentService()


def small_experiment(**fields) -> ExperimentConfig:
    dataset = DatasetConfig(synthetic=SyntheticSpec(n_samples=70))
    return ExperimentConfig(dataset=dataset, **fields)


def test_registration_picks_one_sample_per_class():
    truth = np.array([2, 0, 1, 2, 0, 1, 1])
    chosen = registration_indices(truth, seed=3)
    assert truth[chosen].tolist() == [0, 1, 2]
    np.testing.assert_array_equal(chosen, registration_indices(truth, seed=3))


def test_semi_supervised_stream_registers_first():
    config = small_experiment(protocol=Protocol.SEMI_SUPERVISED, order="class_incremental")
    samples, truth = service.load_data(config)

    stream = service.build_stream(config, samples, truth)

    assert stream.labels[:7] == list(range(7))
    assert all(label is None for label in stream.labels[7:])
    assert stream.eval_samples.shape == (63, 2)
    np.testing.assert_array_equal(stream.truth[7:], stream.eval_truth)


def test_unlabeled_data_only_streams_randomly(tmp_path):
    path = tmp_path / "plain.csv"
    np.savetxt(path, np.random.default_rng(0).normal(size=(20, 3)), delimiter=",")
    dataset = DatasetConfig(source=str(path), has_labels=False)

    with pytest.raises(ConfigError):
        service.run(ExperimentConfig(dataset=dataset, order="mixed"))

    outcome = service.run(ExperimentConfig(dataset=dataset, model="skm", params={"k": 2}))
    assert outcome.results.metrics.ari is None
    assert outcome.results.metrics.k_hat == 2
    assert len(outcome.trace) == 20


def test_skm_run_reports_metrics_and_trace():
    outcome = service.run(small_experiment(model="skm", params={"k": 7}))
    assert len(outcome.trace) == 70
    assert outcome.results.metrics.k_hat == 7
    assert -1.0 <= outcome.results.metrics.ari <= 1.0
    assert outcome.results.params["model"] == {"k": 7}


def test_icvi_run_records_ari_so_far():
    config = small_experiment(preset=Preset.SYNTHETIC_UNSUPERVISED, trace_ari_every=10)
    outcome = service.run(config)

    scored = [r.t for r in outcome.trace if r.ari_so_far is not None]
    assert scored == [10, 20, 30, 40, 50, 60, 70]
    assert outcome.results.metrics.P >= 1
    assert outcome.results.params["preset"] == "synthetic_unsupervised"


def test_nn_needs_semi_supervised_protocol():
    with pytest.raises(ConfigError):
        service.create_runner(small_experiment(model="nn"))


@pytest.fixture
def embeddings_csv(tmp_path):
    X, truth = bench_service.gen_embeddings(seed=2)
    path = tmp_path / "embeddings.csv"
    np.savetxt(path, np.column_stack([X, truth]), delimiter=",", fmt="%.17g")
    return DatasetConfig(source=str(path))


def test_nn_on_orthogonal_embeddings(embeddings_csv):
    config = ExperimentConfig(
        model="nn",
        protocol=Protocol.SEMI_SUPERVISED,
        params={"metric": "cosine"},
        dataset=embeddings_csv,
    )

    metrics = service.run(config).results.metrics

    assert metrics.acc == pytest.approx(1.0)
    assert metrics.n_mis == 0
    assert metrics.k_hat == 4


def test_cosine_engine_clusters_embeddings(embeddings_csv):
    config = ExperimentConfig(preset=Preset.EMBEDDING_UNSUPERVISED, dataset=embeddings_csv)

    outcome = service.run(config)

    assert len(outcome.trace) == 200
    assert outcome.results.params["model"]["match_type"] == "cosine"
    assert outcome.results.metrics.ari >= 0.9
    assert outcome.results.metrics.k_hat == 4


def test_bad_model_params_are_config_errors():
    with pytest.raises(ConfigError):
        service.create_runner(small_experiment(model="ws_dvfa", params={"rho_ub": 0.1, "rho_lb": 0.9}))
    with pytest.raises(ConfigError):
        service.create_runner(small_experiment(params={"no_such_knob": 1}))


def test_preset_then_explicit_params():
    resolved = resolve_artmap_params({"tau": 9}, Preset.SYNTHETIC_UNSUPERVISED, Protocol.UNSUPERVISED)
    assert resolved["tau"] == 9
    assert resolved["xi"] == 600


def test_conn_presets():
    synthetic = resolve_artmap_params(
        {"icvi": "conn", "rho_a": 0.3}, Preset.SYNTHETIC_UNSUPERVISED, Protocol.UNSUPERVISED
    )
    assert synthetic["rho_c"] == 0.3
    embedding = resolve_artmap_params({"icvi": "conn"}, Preset.EMBEDDING_UNSUPERVISED, Protocol.UNSUPERVISED)
    assert embedding["beta_2"] == 0.6


def test_semi_supervised_defaults_to_fixed_learning():
    assert resolve_artmap_params({}, None, Protocol.SEMI_SUPERVISED)["l_type"] == "fixed"
    kept = resolve_artmap_params({"l_type": "variable"}, None, Protocol.SEMI_SUPERVISED)
    assert kept["l_type"] == "variable"


def test_grid_point_splits_experiment_fields_from_params():
    config = small_experiment(model="ws_topofa", params={"phi": 0})
    point = service.with_point(config, {"seed": 4, "rho": 0.5})
    assert point.seed == 4
    assert point.params == {"phi": 0, "rho": 0.5}
    assert point.sweep == {}


def test_vigilance_sweep_has_one_row_per_point():
    config = small_experiment(model="ws_topofa", sweep={"rho": "0:0.9:0.1"})
    rows, best = service.sweep(config)
    assert len(rows) == 10
    assert [row.params["rho"] for row in rows][:2] == [0, 0.1]
    assert best is not None
    assert best.metrics.ari == max(row.metrics.ari for row in rows)


def test_nested_sweep_is_cartesian():
    config = small_experiment(model="skm", sweep={"k": [2, 7], "seed": [0, 1, 2]})
    rows, _ = service.sweep(config)
    assert len(rows) == 6
