"""Variable-level explanations: loadings, importance ranking, cell scores.

Components are numbered from 1 (``AC1`` is the first); variables are
0-based column indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .depth import as_data, proj_depth
from .errors import InvalidInputError
from .model import AcaModel
from .optimize import OptimizerConfig


@dataclass(frozen=True)
class LoadingReport:
    """Coordinates of one component ordered by decreasing magnitude."""

    component: int
    variables: np.ndarray
    loadings: np.ndarray
    shares: np.ndarray

    @property
    def entries(self) -> list[tuple[int, float, float]]:
        return [(int(v), float(l), float(s))
                for v, l, s in zip(self.variables, self.loadings, self.shares)]

    def top(self, m: int) -> list[tuple[int, float, float]]:
        return self.entries[:m]


def _rank_by_magnitude(u: np.ndarray) -> np.ndarray:
    # stable sort keeps the lower index first among equal magnitudes
    return np.argsort(-np.abs(u), kind="stable")


def component_loadings(model: AcaModel, i: int) -> LoadingReport:
    """Loadings of component ``i`` (1-based) with their share of ``sum |loading|``."""
    if not 1 <= i <= model.n_components:
        raise InvalidInputError(
            f"component index must be in [1, {model.n_components}], got {i}")
    u = model.components[:, i - 1]
    order = _rank_by_magnitude(u)
    mags = np.abs(u)
    return LoadingReport(i, order, u[order], mags[order] / mags.sum())


def variable_importance(model: AcaModel) -> np.ndarray:
    """Variables ordered by decreasing absolute contribution to AC1."""
    if model.n_components < 1:
        raise InvalidInputError("model has no components")
    return _rank_by_magnitude(model.components[:, 0])


def cell_scores(y, data, config: OptimizerConfig | None = None) -> np.ndarray:
    """Per-variable anomaly scores of point ``y``.

    Score ``i`` is ``|u_i| * (1 / D_apd(y) - 1)`` where ``u`` is the direction
    minimizing the projection depth of ``y`` and ``D_apd`` its asymmetric
    projection depth.  A zero asymmetric depth gives ``inf`` for every
    variable with a nonzero coordinate in ``u``.
    """
    X = as_data(data)
    config = config or OptimizerConfig()
    u = proj_depth(y, X, None, "pd", config).direction
    d_apd = proj_depth(y, X, None, "apd", config).depth
    mags = np.abs(u)
    if d_apd == 0.0:
        return np.where(mags > 0, np.inf, 0.0)
    return mags * (1.0 / d_apd - 1.0)
