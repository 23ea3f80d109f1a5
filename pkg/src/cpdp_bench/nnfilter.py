"""Nearest-neighbour relevancy filter.

For every instance of the target project, the k nearest instances of the
merged source pool (Euclidean distance over the supplied feature space) are
collected; the union, deduplicated by pool-row identity, is the filtered
training set. Target labels are never consulted.
"""

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SchemaError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FilterParams:
    """Neighbour count per target instance (Euclidean distance)."""

    k: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


def nn_filter(pool, target, params=FilterParams()):
    """Select the union of each target row's k nearest pool rows.

    Distance ties at the k-th neighbour break by (distance, origin dataset
    name, origin row index), so the result is independent of pool row order.
    k larger than the pool is clamped (and logged). Returns a sub-dataset of
    the pool, ordered by origin.
    """
    if len(pool) == 0:
        raise ValueError("source pool is empty")
    if pool.schema != target.schema:
        raise SchemaError(
            f"pool schema does not match target {target.name!r} schema"
        )
    k = params.k
    if k > len(pool):
        log.warning(
            "nn_filter: k=%d exceeds pool size %d for target %s; clamping",
            k, len(pool), target.name,
        )
        k = len(pool)

    # canonical pool order: ties at equal distance resolve by origin
    canonical = np.lexsort((pool.origin_rows, pool.origin_names))
    neighbours = kernels.knn_indices(target.features, pool.features[canonical], k)
    selected = np.unique(neighbours.ravel())
    return pool.take(canonical[selected])
