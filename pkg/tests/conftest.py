import numpy as np
import pytest

from src.schemas.config_schemas import ArtmapConfig


@pytest.fixture
def index_clusters():
    """Cluster A = {0, 2}, cluster B = {4, 6}, d = 1"""
    return [[[0.0], [2.0]], [[4.0], [6.0]]]


@pytest.fixture
def conn_fixture():
    """Prototypes {0, 1} form one cluster, {2} another; CONN(0,1)=4, CONN(1,2)=1"""
    conn = np.array([[0, 4, 0], [4, 0, 1], [0, 1, 0]], dtype=np.int64)
    labels = np.array([0, 0, 1], dtype=np.int64)
    return conn, labels


@pytest.fixture
def quiet_config():
    """Engine config with every post-processing strategy and iCVI match tracking off"""
    return ArtmapConfig(
        en_swap=False,
        en_merge=False,
        en_split=False,
        en_compress=False,
        en_prune_reassign=False,
        en_mt_icvi=False,
    )


@pytest.fixture
def two_blobs():
    rng = np.random.default_rng(7)
    a = rng.normal([0.0, 0.0], 0.3, size=(40, 2))
    b = rng.normal([6.0, 6.0], 0.3, size=(40, 2))
    X = np.vstack([a, b])
    truth = np.array([0] * 40 + [1] * 40)
    order = rng.permutation(80)
    return X[order], truth[order]
