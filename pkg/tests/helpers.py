from typing import List, Sequence

import numpy as np

from src.models.category_model import Category, ModuleA
from src.models.edit_model import Presentation
from src.models.icvi_model import IcviState
from src.schemas.config_schemas import IcviName
from src.services import stats_service
from src.services.icvi_service import icvi_service

Clusters = Sequence[Sequence[Sequence[float]]]


def build_icvi_state(which: IcviName, clusters: Clusters) -> IcviState:
    """Commit each cluster's samples through one prototype per cluster"""
    state = IcviState(which=which)
    first = True
    for c, samples in enumerate(clusters):
        for i, x in enumerate(samples):
            x = np.asarray(x, dtype=float)
            if first:
                icvi_service.initialize(state, x)
                first = False
                continue
            icvi_service.commit(state, x, Presentation(c, None, i == 0, c))
    return state


def build_module_a(clusters: Clusters) -> ModuleA:
    """One category per cluster, carrying that cluster's batch statistics"""
    categories: List[Category] = []
    for samples in clusters:
        X = np.asarray(samples, dtype=float)
        w = np.full(2 * X.shape[1], 0.5)
        categories.append(Category(w=w, stats=stats_service.batch_stats(X)))
    p = len(categories)
    return ModuleA(categories=categories, conn=np.zeros((p, p), dtype=np.int64))
