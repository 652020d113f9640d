"""PCA baseline and alignment metrics against the oracle direction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import InvalidInputError


@dataclass(frozen=True)
class ComponentSet:
    """Unit components as columns of a ``(d, m)`` array, most important first."""

    components: np.ndarray
    method: str


def pca_components(data, m: int | None = None) -> ComponentSet:
    """Leading ``m`` eigenvectors of the sample covariance.

    Each eigenvector is signed so its largest-magnitude coordinate is
    positive.  Eigenvalues equal within 1e-12 are ordered by the signed
    eigenvectors, lexicographically.
    """
    X = np.asarray(data, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise InvalidInputError("PCA needs a 2-D array with at least two rows")
    d = X.shape[1]
    m = d if m is None else int(m)
    if not 1 <= m <= d:
        raise InvalidInputError(f"number of components must be in [1, {d}], got {m}")
    S = np.atleast_2d(np.cov(X, rowvar=False))
    w, V = np.linalg.eigh(S)
    big = np.argmax(np.abs(V), axis=0)
    V = V * np.where(V[big, np.arange(d)] < 0, -1.0, 1.0)
    # group eigenvalues into tie classes, largest first
    level = np.round(w / 1e-12) if np.ptp(w) > 0 else np.zeros(d)
    cols = sorted(range(d), key=lambda j: (-level[j], tuple(-V[:, j])))
    return ComponentSet(V[:, cols[:m]], "pca")


def oracle_direction(cov, center) -> np.ndarray:
    """``cov^-1 center`` normalized to unit length."""
    C = np.asarray(cov, dtype=float)
    mu = np.asarray(center, dtype=float).ravel()
    if not np.any(mu):
        raise InvalidInputError("anomaly center must be nonzero")
    try:
        v = np.linalg.solve(C, mu)
    except np.linalg.LinAlgError:
        raise InvalidInputError("covariance matrix is singular") from None
    if not np.all(np.isfinite(v)) or np.linalg.cond(C) > 1e14:
        raise InvalidInputError("covariance matrix is singular")
    return v / np.linalg.norm(v)


def best_aligned(components, u_star) -> tuple[int, float]:
    """Component number (1-based) closest in angle to ``u_star`` and that angle.

    Angles use ``arccos(|u_i . u_star|)``, so they lie in ``[0, pi/2]`` and
    ignore signs; ties go to the lower number.
    """
    A = components.components if isinstance(components, ComponentSet) else components
    A = np.atleast_2d(np.asarray(A, dtype=float))
    u = np.asarray(u_star, dtype=float).ravel()
    if A.shape[0] != u.size:
        raise InvalidInputError("components and u_star differ in dimension")
    if A.shape[1] == 0:
        raise InvalidInputError("no components to compare")
    cosines = np.clip(np.abs(u @ A) / np.linalg.norm(u), 0.0, 1.0)
    angles = np.arccos(cosines)
    j = int(np.argmin(angles))
    return j + 1, float(angles[j])


def auc(scores, labels) -> float:
    """Area under the ROC curve of ``scores`` for boolean ``labels`` (ties count half)."""
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=bool)
    pos, neg = s[y], s[~y]
    if pos.size == 0 or neg.size == 0:
        raise InvalidInputError("AUC needs both classes")
    ranks = rankdata(np.r_[pos, neg])
    return float((ranks[:pos.size].sum() - pos.size * (pos.size + 1) / 2)
                 / (pos.size * neg.size))
