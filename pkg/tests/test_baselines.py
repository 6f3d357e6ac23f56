import numpy as np
import pytest

from src.schemas.baseline_schemas import (
    DistanceMetric,
    DvfaConfig,
    ETopoFaConfig,
    NnConfig,
    SkmConfig,
    TopoFaConfig,
)
from src.services.baseline_service import baseline_service
from src.utils.exceptions import EmptyModelError


def test_skm_running_mean_update():
    model = baseline_service.skm_create(SkmConfig(k=1))
    baseline_service.skm_step(model, np.array([0.0, 0.0]))
    assert baseline_service.skm_step(model, np.array([2.0, 2.0])) == 0
    np.testing.assert_allclose(model.centroids[0], [1.0, 1.0])


def test_skm_single_centroid_is_grand_mean():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(25, 3))
    model = baseline_service.skm_create(SkmConfig(k=1))
    for x in X:
        baseline_service.skm_step(model, x)
    np.testing.assert_allclose(model.centroids[0], X.mean(axis=0))


def test_skm_sample_at_centroid_keeps_it():
    model = baseline_service.skm_create(SkmConfig(k=2))
    baseline_service.skm_step(model, np.array([0.0]))
    baseline_service.skm_step(model, np.array([5.0]))
    baseline_service.skm_step(model, np.array([5.0]))
    np.testing.assert_allclose(model.centroids, [[0.0], [5.0]])


def test_skm_seeds_then_predicts():
    model = baseline_service.skm_create(SkmConfig(k=2))
    assert [baseline_service.skm_step(model, np.array([x])) for x in (0.0, 10.0, 1.0)] == [0, 1, 0]
    np.testing.assert_array_equal(baseline_service.skm_predict(model, [[9.0], [-1.0]]), [1, 0])


def test_skm_predict_needs_samples():
    with pytest.raises(EmptyModelError):
        baseline_service.skm_predict(baseline_service.skm_create(), [[0.0]])


def test_dvfa_far_sample_opens_cluster():
    model = baseline_service.dvfa_create(DvfaConfig(rho_ub=0.9, rho_lb=0.5))
    assert baseline_service.dvfa_step(model, np.array([0.0])) == 0
    assert baseline_service.dvfa_step(model, np.array([10.0])) == 1
    assert model.n_clusters == 2


def test_dvfa_near_sample_joins_cluster_as_new_category():
    model = baseline_service.dvfa_create(DvfaConfig(rho_ub=0.9, rho_lb=0.5))
    for x in (0.0, 10.0):
        baseline_service.dvfa_step(model, np.array([x]))

    # 7 sits at match 0.7 from the box at 10: fails 0.9, passes 0.5
    assert baseline_service.dvfa_step(model, np.array([7.0])) == 1
    assert model.module_a.size == 3
    assert model.n_clusters == 2
    np.testing.assert_array_equal(baseline_service.dvfa_predict(model, [[7.0], [0.0]]), [1, 0])


def test_dvfa_equal_vigilances_give_one_cluster_per_category():
    model = baseline_service.dvfa_create(DvfaConfig(rho_ub=0.8, rho_lb=0.8))
    for x in (0.0, 10.0, 5.0, 9.5):
        baseline_service.dvfa_step(model, np.array([x]))
    assert model.n_clusters == model.module_a.size


def test_topofa_linked_categories_share_component():
    model = baseline_service.topofa_create(TopoFaConfig(rho=0.9, phi=0))
    for x in (0.0, 10.0, 20.0):
        baseline_service.topofa_step(model, np.array([x]))
    np.testing.assert_array_equal(baseline_service.topofa_clusters(model), [0, 1, 2])

    model.module_a.conn[0, 1] = model.module_a.conn[1, 0] = 1
    np.testing.assert_array_equal(baseline_service.topofa_clusters(model), [0, 0, 1])


def test_topofa_zero_vigilance_grows_one_category():
    model = baseline_service.topofa_create(TopoFaConfig(rho=0.0, phi=0))
    baseline_service.topofa_step(model, np.array([0.0]))
    baseline_service.topofa_step(model, np.array([1.0]))
    assert model.module_a.size == 1
    assert baseline_service.topofa_clusters(model).tolist() == [0]


def test_topofa_prune_drops_rare_categories():
    model = baseline_service.topofa_create(TopoFaConfig(rho=0.95, phi=2, tau=100))
    for x in (0.0, 0.0, 10.0):
        baseline_service.topofa_step(model, np.array([x]))
    assert baseline_service.topofa_prune(model) == 1
    assert model.module_a.size == 1
    assert model.module_a.frequencies.tolist() == [2]


def test_topofa_phi_zero_never_prunes():
    model = baseline_service.topofa_create(TopoFaConfig(rho=0.95, phi=0, tau=1))
    for x in (0.0, 10.0, 20.0):
        baseline_service.topofa_step(model, np.array([x]))
    assert model.module_a.size == 3


def test_topofa_prune_keeps_model_when_everything_is_rare():
    model = baseline_service.topofa_create(TopoFaConfig(rho=0.95, phi=5))
    for x in (0.0, 10.0):
        baseline_service.topofa_step(model, np.array([x]))
    assert baseline_service.topofa_prune(model) == 0
    assert model.module_a.size == 2


def test_etopofa_categories_are_clusters():
    model = baseline_service.etopofa_create(ETopoFaConfig(rho=0.9))
    assert [baseline_service.etopofa_step(model, np.array([x])) for x in (0.0, 10.0, 0.0)] == [0, 1, 0]
    np.testing.assert_array_equal(baseline_service.etopofa_predict(model, [[10.0]]), [1])


def test_etopofa_predict_needs_samples():
    with pytest.raises(EmptyModelError):
        baseline_service.etopofa_predict(baseline_service.etopofa_create(), [[0.0]])


def test_nn_prototype_returns_own_label():
    model = baseline_service.nn_create([[0.0, 0.0], [4.0, 4.0]], [3, 7])
    np.testing.assert_array_equal(baseline_service.nn_classify(model, [[4.0, 4.0], [0.1, 0.0]]), [7, 3])


def test_nn_tie_goes_to_lowest_index():
    model = baseline_service.nn_create([[0.0], [2.0]], [5, 1])
    assert baseline_service.nn_classify(model, [[1.0]]).tolist() == [5]


def test_nn_cosine_ignores_scale():
    model = baseline_service.nn_create(
        [[1.0, 0.0], [0.0, 1.0]], [0, 1], NnConfig(metric=DistanceMetric.COSINE)
    )
    assert baseline_service.nn_classify(model, [[0.1, 5.0]]).tolist() == [1]


def test_nn_needs_prototypes():
    with pytest.raises(EmptyModelError):
        baseline_service.nn_create(np.zeros((0, 2)), [])


def test_dvfa_config_rejects_inverted_vigilances():
    with pytest.raises(ValueError):
        DvfaConfig(rho_ub=0.5, rho_lb=0.7)
