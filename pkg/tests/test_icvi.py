import numpy as np
import pytest

from src.models.edit_model import MergeEdit, MoveEdit
from src.models.icvi_model import IcviState
from src.schemas.config_schemas import ArtmapConfig, IcviName, MatchType
from src.services.icvi_service import icvi_service
from src.services.trainer_service import trainer_service
from src.utils.exceptions import IndexUndefinedError
from tests.helpers import build_icvi_state, build_module_a


@pytest.mark.parametrize(
    "which, expected",
    [
        (IcviName.CH, 8.0),
        (IcviName.WB, 0.5),
        (IcviName.XB, 0.0625),
        (IcviName.DB, 0.5),
        (IcviName.PBM, 100.0),
    ],
)
def test_index_values_on_two_cluster_fixture(index_clusters, which, expected):
    state = build_icvi_state(which, index_clusters)
    assert state.k == 2
    assert icvi_service.value(state) == pytest.approx(expected)


@pytest.mark.parametrize("which", [IcviName.CH, IcviName.WB, IcviName.XB, IcviName.DB, IcviName.PBM])
def test_incremental_matches_batch(index_clusters, which):
    state = build_icvi_state(which, index_clusters)
    X = np.array([[0.0], [2.0], [4.0], [6.0]])
    expected = icvi_service.batch_index_value(which, X, np.array([0, 0, 1, 1]))
    assert state.value == pytest.approx(expected)


def test_single_cluster_index_is_undefined():
    state = build_icvi_state(IcviName.CH, [[[0.0], [1.0]]])
    assert state.value is None
    with pytest.raises(IndexUndefinedError):
        icvi_service.value(state)
    with pytest.raises(IndexUndefinedError):
        icvi_service.score_assignments(state, np.array([0.5]))


def test_conn_index_by_hand(conn_fixture):
    conn, labels = conn_fixture
    assert icvi_service.batch_conn_index(conn, labels) == pytest.approx(4 / 9 * 0.4)


def test_conn_index_is_label_permutation_invariant(conn_fixture):
    conn, labels = conn_fixture
    assert icvi_service.batch_conn_index(conn, 1 - labels) == pytest.approx(
        icvi_service.batch_conn_index(conn, labels)
    )


def test_conn_resync_matches_batch(conn_fixture):
    conn, labels = conn_fixture
    state = IcviState(which=IcviName.CONN, n=np.array([2, 1]))
    icvi_service.resync_prototypes(state, conn, labels, np.array([1, 1, 1]))
    assert state.value == pytest.approx(icvi_service.batch_conn_index(conn, labels))


@pytest.mark.parametrize("which", [IcviName.CH, IcviName.XB])
def test_score_assignments_prefers_nearer_cluster(index_clusters, which):
    state = build_icvi_state(which, index_clusters)
    scores = icvi_service.score_assignments(state, np.array([1.9]))
    assert int(np.argmax(scores)) == 0


def test_score_assignments_leaves_state_alone(index_clusters):
    state = build_icvi_state(IcviName.CH, index_clusters)
    before = state.clone()
    icvi_service.score_assignments(state, np.array([5.0]))
    np.testing.assert_array_equal(state.n, before.n)
    np.testing.assert_allclose(state.mu, before.mu)
    assert state.value == before.value


def test_score_assignments_symmetric_midpoint():
    state = build_icvi_state(IcviName.CH, [[[0.0], [2.0]], [[6.0], [8.0]]])
    scores = icvi_service.score_assignments(state, np.array([4.0]))
    assert scores[0] == pytest.approx(scores[1])


def test_label_matrix_two_way_tie():
    np.testing.assert_array_equal(
        icvi_service.label_matrix(np.array([0.5, 0.9, 0.9])), [[0, 1, 0], [0, 0, 1]]
    )


def test_label_matrix_unique_max_and_all_equal():
    assert icvi_service.label_matrix(np.array([0.1, 0.3, 0.2])).shape == (1, 3)
    np.testing.assert_array_equal(icvi_service.label_matrix(np.ones(3)), np.eye(3))


def test_match_tracking_jumps_to_target_vigilance():
    config = ArtmapConfig(rho_a=0.0, rho_mt_icvi=0.9, tau=0)
    state = IcviState(which=IcviName.CH)
    assert icvi_service.match_tracking(state, 0.0, config) == pytest.approx(0.9)


def test_match_tracking_cosine_lowers_vigilance():
    config = ArtmapConfig(match_type=MatchType.COSINE, rho_a=2.0, rho_mt_icvi=0.1, tau=0)
    state = IcviState(which=IcviName.CH)
    assert config.icvi_step == pytest.approx(1.9)
    assert icvi_service.match_tracking(state, 2.0, config) == pytest.approx(0.1)


def test_match_tracking_waits_for_tracker():
    config = ArtmapConfig(rho_a=0.2, rho_mt_icvi=0.9, tau=3, epsilon_icvi=0.1)
    state = IcviState(which=IcviName.CH, v=2)
    assert icvi_service.match_tracking(state, 0.5, config) == 0.2
    state.v = 3
    assert icvi_service.match_tracking(state, 0.5, config) == pytest.approx(0.6)


@pytest.mark.parametrize(
    "which, start_v, expected_v",
    [
        (IcviName.CH, 0, 1),  # max-optimal, 5 -> 4 is worse
        (IcviName.WB, 2, 1),  # min-optimal, 5 -> 4 is better
        (IcviName.WB, 0, 0),
    ],
)
def test_tracker_update(which, start_v, expected_v):
    state = IcviState(which=which, v=start_v)
    icvi_service.tracker_update(state, 5.0, 4.0)
    assert state.v == expected_v


def test_tracker_ignores_undefined_values():
    state = IcviState(which=IcviName.CH, v=1)
    icvi_service.tracker_update(state, None, 4.0)
    assert state.v == 1


def test_merge_edit_collapses_to_single_cluster(index_clusters):
    state = build_icvi_state(IcviName.CH, index_clusters)
    module_a = build_module_a(index_clusters)
    icvi_service.restructure(state, MergeEdit(keep=0, absorb=1), module_a)
    assert state.k == 1
    assert state.value is None
    assert state.n[0] == 4
    assert state.cp[0] == pytest.approx(20.0)


def test_move_edit_matches_batch():
    clusters = [[[0.0], [2.0]], [[4.0], [6.0]], [[7.0]]]
    state = build_icvi_state(IcviName.DB, clusters)
    module_a = build_module_a(clusters)

    # category 2 ({7}) joins cluster 1
    icvi_service.restructure(state, MoveEdit(category=2, target=1), module_a)

    X = np.array([[0.0], [2.0], [4.0], [6.0], [7.0]])
    expected = icvi_service.batch_index_value(IcviName.DB, X, np.array([0, 0, 1, 1, 1]))
    assert state.k == 2
    assert state.value == pytest.approx(expected)
    np.testing.assert_array_equal(state.proto_labels, [0, 1, 1])


def test_preview_does_not_touch_state(index_clusters):
    state = build_icvi_state(IcviName.WB, index_clusters)
    module_a = build_module_a(index_clusters)
    value = icvi_service.preview(state, [MergeEdit(keep=0, absorb=1)], module_a)
    assert value is None
    assert state.k == 2


def test_is_better_respects_direction():
    ch = IcviState(which=IcviName.CH)
    xb = IcviState(which=IcviName.XB)
    assert icvi_service.is_better(ch, 2.0, 1.0)
    assert icvi_service.is_better(xb, 1.0, 2.0)
    assert not icvi_service.is_better(ch, None, 1.0)
    assert icvi_service.is_better(ch, 1.0, None)


@pytest.mark.parametrize("which", list(IcviName))
def test_incremental_state_survives_batch_oracle(which):
    """Every step of a full pipeline re-checks the index against a batch recomputation"""
    rng = np.random.default_rng(11)
    means = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]])
    X = np.vstack([rng.normal(m, 0.4, size=(15, 2)) for m in means])
    X = X[rng.permutation(len(X))]

    config = ArtmapConfig(
        icvi=which,
        rho_a=0.6,
        rho_mt_icvi=0.8,
        tau=2,
        xi=8,
        phi=3,
        oracle_checks=True,
    )
    network = trainer_service.create(config)
    trainer_service.run_stream(network, X)

    assert network.t == len(X)
    assert network.n_clusters == network.icvi.k
    assert int(network.module_a.frequencies.sum()) == len(X)
