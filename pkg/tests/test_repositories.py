import csv
import json

import numpy as np
import pytest

from src.repositories.base_repository import format_cell
from src.repositories.dataset_repository import get_dataset_repository
from src.repositories.experiment_repository import get_experiment_repository
from src.repositories.external_results_repository import get_external_results_repository
from src.repositories.results_repository import (
    RESULTS_FILE,
    TRACE_FIELDS,
    TRACE_FILE,
    get_results_repository,
)
from src.schemas.report_schemas import ComparisonRow, RunMetrics, RunResults, StepReport
from src.utils.exceptions import ConfigError, DatasetError


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_ingest_labeled_file_with_header(tmp_path):
    path = write(tmp_path / "data.csv", "a,b,c,label\n0.1,0.2,0.3,0\n1,2,3,1\n")
    dataset = get_dataset_repository().ingest(path, has_labels=True)
    assert dataset.samples.shape == (2, 3)
    assert dataset.labels.tolist() == [0, 1]


def test_ingest_unlabeled_file(tmp_path):
    path = write(tmp_path / "data.csv", "0.1,0.2\n0.3,0.4\n")
    dataset = get_dataset_repository().ingest(path, has_labels=False)
    assert dataset.labels is None
    np.testing.assert_allclose(dataset.samples, [[0.1, 0.2], [0.3, 0.4]])


def test_ingest_ragged_row_names_line(tmp_path):
    path = write(tmp_path / "data.csv", "1,2,0\n3,4\n")
    with pytest.raises(DatasetError, match=":2:"):
        get_dataset_repository().ingest(path)


def test_ingest_non_numeric_cell_names_line(tmp_path):
    path = write(tmp_path / "data.csv", "x,y,label\n1,2,0\n3,oops,1\n")
    with pytest.raises(DatasetError, match=":3:"):
        get_dataset_repository().ingest(path)


@pytest.mark.parametrize("text", ["", "x,y,label\n", "\n\n"])
def test_ingest_empty_file(tmp_path, text):
    with pytest.raises(DatasetError):
        get_dataset_repository().ingest(write(tmp_path / "data.csv", text))


def test_ingest_rejects_fractional_labels(tmp_path):
    with pytest.raises(DatasetError):
        get_dataset_repository().ingest(write(tmp_path / "data.csv", "1,2,0.5\n"))


def test_ingest_missing_file(tmp_path):
    with pytest.raises(DatasetError):
        get_dataset_repository().ingest(tmp_path / "absent.csv")


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(True) == "true"
    assert format_cell(3) == "3"
    value = 0.1 + 0.2
    assert float(format_cell(value)) == value


def sample_results() -> RunResults:
    return RunResults(
        name="demo",
        model="skm",
        order="random",
        protocol="unsupervised",
        seed=1,
        n_samples=10,
        metrics=RunMetrics(ari=0.75, k_hat=3),
        runtime_s=0.25,
        params={"k": 3},
    )


def test_results_round_trip_leaves_no_temp_files(tmp_path):
    repository = get_results_repository(tmp_path / "run")
    repository.save_results(sample_results())

    assert repository.load_results() == sample_results()
    assert [p.name for p in (tmp_path / "run").iterdir()] == [RESULTS_FILE]
    assert json.loads((tmp_path / "run" / RESULTS_FILE).read_text())["schema_version"] == 1


def test_trace_keeps_full_precision(tmp_path):
    repository = get_results_repository(tmp_path)
    rho = 1 / 3
    repository.save_trace(
        [StepReport(t=1, assigned_cluster=0, k=1, P=1, rho_a=rho, v=0)]
    )

    with open(tmp_path / TRACE_FILE, newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert list(rows[0]) == TRACE_FIELDS
    assert float(rows[0]["rho_a"]) == rho
    assert rows[0]["icvi_value"] == ""


def test_external_table_round_trip(tmp_path):
    table = write(tmp_path / "reported.csv", "model,order,ari,k_hat,P\nws_dvfa,mixed,0.81,7,\n")
    repository = get_external_results_repository(tmp_path)

    rows = repository.read_table(table)

    assert rows == [ComparisonRow(model="ws_dvfa", order="mixed", ari=0.81, k_hat=7, source="reported")]
    out = repository.write_table("comparison.csv", rows)
    assert out.read_text().splitlines()[0] == "model,order,ari,k_hat,P,source"


def test_external_table_bad_cell(tmp_path):
    table = write(tmp_path / "t.csv", "model,order,ari\nskm,random,high\n")
    with pytest.raises(DatasetError, match=":2:"):
        get_external_results_repository(tmp_path).read_table(table)


def test_external_table_missing_columns(tmp_path):
    table = write(tmp_path / "t.csv", "name,ari\nskm,0.5\n")
    with pytest.raises(DatasetError):
        get_external_results_repository(tmp_path).read_table(table)


def test_experiment_file(tmp_path):
    path = write(tmp_path / "exp.toml", 'name = "e1"\nmodel = "skm"\n[params]\nk = 7\n')
    assert get_experiment_repository().read(path) == {"name": "e1", "model": "skm", "params": {"k": 7}}
    with pytest.raises(ConfigError):
        get_experiment_repository().read(write(tmp_path / "bad.toml", "name = \n"))
    with pytest.raises(ConfigError):
        get_experiment_repository().read(tmp_path / "none.toml")
