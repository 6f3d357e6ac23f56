"""
Geometry Service - online range tracking, complement coding and weight re-scaling
"""

import logging
from typing import Optional, Tuple

import numpy as np

from src.models.range_model import RangeState
from src.utils.exceptions import DimensionMismatchError, RangeShrinkError

logger = logging.getLogger(__name__)

DEGENERATE_LEVEL = 0.5


def observe(
    state: Optional[RangeState], x: np.ndarray
) -> Tuple[RangeState, bool]:
    """Absorb x into the running bounds; expanded is True iff a bound moved"""
    x = np.asarray(x, dtype=float)

    if state is None:
        return RangeState.from_sample(x), False

    if x.shape != state.x_min.shape:
        raise DimensionMismatchError(
            f"Sample has {x.shape[0] if x.ndim else 0} features, range tracks {state.d}"
        )

    new_min = np.minimum(state.x_min, x)
    new_max = np.maximum(state.x_max, x)
    expanded = bool(np.any(new_min < state.x_min) or np.any(new_max > state.x_max))

    if not expanded:
        return state, False

    return RangeState(x_min=new_min, x_max=new_max), True


def normalize(state: RangeState, x: np.ndarray) -> np.ndarray:
    """Min-max transform; degenerate features sit at 0.5, out-of-range values clip"""
    x = np.asarray(x, dtype=float)
    if x.shape != state.x_min.shape:
        raise DimensionMismatchError(
            f"Sample has {x.shape[0] if x.ndim else 0} features, range tracks {state.d}"
        )

    span = state.span
    open_features = span > 0.0
    safe_span = np.where(open_features, span, 1.0)
    scaled = np.where(open_features, (x - state.x_min) / safe_span, DEGENERATE_LEVEL)
    return np.clip(scaled, 0.0, 1.0)


def normalize_cc(state: RangeState, x: np.ndarray) -> np.ndarray:
    scaled = normalize(state, x)
    return np.concatenate([scaled, 1.0 - scaled])


def denormalize(state: RangeState, z: np.ndarray) -> np.ndarray:
    """Inverse min-max transform (identity offset on degenerate features)"""
    return state.x_min + np.asarray(z, dtype=float) * state.span


def rescale_weights(
    range_old: RangeState,
    range_new: RangeState,
    weights: np.ndarray,
    clamp: bool = True,
) -> np.ndarray:
    """
    Map hyperbox weights [u, 1 - v] from range_old coordinates to range_new coordinates.

    Lower corners and upper corners go through the same affine map; the complement half
    is written directly through its own recursion. Features that are still degenerate in
    range_new keep their weights.
    """
    if not range_new.contains(range_old):
        raise RangeShrinkError("Weights can only be re-scaled onto a wider data range")

    weights = np.array(weights, dtype=float, copy=True)
    if weights.size == 0:
        return weights.reshape(0, 2 * range_new.d)

    single = weights.ndim == 1
    if single:
        weights = weights[None, :]

    d = range_new.d
    span_new = range_new.span
    active = span_new > 0.0
    if not np.any(active):
        return weights[0] if single else weights

    safe_span = np.where(active, span_new, 1.0)
    ratio = np.where(active, range_old.span / safe_span, 1.0)
    low_shift = np.where(active, (range_old.x_min - range_new.x_min) / safe_span, 0.0)
    high_shift = np.where(active, (range_new.x_max - range_old.x_max) / safe_span, 0.0)

    u = weights[:, :d] * ratio + low_shift
    v_bar = weights[:, d:] * ratio + high_shift

    if clamp:
        u = np.maximum(u, 0.0)
        v_bar = np.maximum(v_bar, 0.0)

    rescaled = np.concatenate([u, v_bar], axis=1)
    logger.debug(f"Re-scaled {rescaled.shape[0]} weight vectors onto the wider range")
    return rescaled[0] if single else rescaled
