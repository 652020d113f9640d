"""Abnormal component analysis: sequential minimum-depth directions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .depth import DepthNotion, as_data, depth1, dataset_depths
from .errors import InvalidInputError
from .optimize import OptimizerConfig
from .robust_stats import median
from .subspace import orthonormal_complement, reorthonormalize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AcaModel:
    """Fitted abnormal components.

    Attributes:
        components: ``(d, p)`` array, column ``i`` is the ``i``-th component.
        min_depths: depth of the anchor row when each component was found.
        anchor_rows: index of the minimal-depth row for each component.
    """

    ambient_dim: int
    components: np.ndarray
    min_depths: np.ndarray
    anchor_rows: np.ndarray
    notion: DepthNotion = DepthNotion.PD
    config: OptimizerConfig = field(default_factory=OptimizerConfig)

    @property
    def n_components(self) -> int:
        return self.components.shape[1]

    def transform(self, data) -> np.ndarray:
        return transform(self, data)


def orient(u, anchor, data) -> np.ndarray:
    """Flip ``u`` when the anchor projects strictly below the median projection."""
    u = np.asarray(u, dtype=float)
    proj = np.asarray(data, dtype=float) @ u
    if float(np.dot(anchor, u)) < median(proj):
        return -u
    return u


def fit(data, p: int, notion="pd", config: OptimizerConfig | None = None,
        callback: Callable[[int, np.ndarray], bool] | None = None) -> AcaModel:
    """Extract ``p`` abnormal components from ``data``.

    Each step scans every row for its approximate depth restricted to the
    orthogonal complement of the components found so far, takes the
    direction realizing the smallest depth, and orients it so the anchor row
    lies on its positive side.

    Args:
        data: ``(n, d)`` array.
        p: number of components, ``1 <= p <= d``.
        notion: ``"pd"`` or ``"apd"``.
        config: search parameters; row generators derive from ``config.seed``.
        callback: optional ``callback(i, components_so_far)``; returning True
            stops the extraction early after component ``i``.

    Raises:
        InvalidInputError: on a bad ``p``, fewer than two rows or non-finite data.
    """
    X = as_data(data)
    n, d = X.shape
    if not 1 <= p <= d:
        raise InvalidInputError(f"number of components must be in [1, {d}], got {p}")
    notion = DepthNotion.parse(notion)
    config = config or OptimizerConfig()

    A = np.zeros((d, 0))
    depths, anchors = [], []
    for i in range(p):
        B = orthonormal_complement(A, d)
        dep, dirs, _ = dataset_depths(X, B, notion, config, key=i)
        j = int(np.argmin(dep))
        u = orient(dirs[j], X[j], X)
        A = reorthonormalize(np.column_stack([A, u]))
        u = A[:, -1]
        anchors.append(j)
        # the flip can change an asymmetric depth, so record it along u itself
        depths.append(dep[j] if u @ dirs[j] > 0 else depth1(X[j] @ u, X @ u, notion))
        logger.debug("component %d: row %d, depth %.6g", i + 1, j, depths[-1])
        if callback is not None and callback(i + 1, A):
            break
    return AcaModel(d, A, np.array(depths), np.array(anchors, dtype=np.int64),
                    notion, config)


def transform(model: AcaModel, data) -> np.ndarray:
    """Scores of ``data`` on the components, shape ``(n, p)``."""
    X = np.asarray(data, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1) if X.size else X.reshape(0, model.ambient_dim)
    if X.shape[1] != model.ambient_dim:
        raise InvalidInputError(
            f"data has {X.shape[1]} columns but the model expects {model.ambient_dim}"
        )
    return X @ model.components
