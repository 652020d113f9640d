"""Synthetic benchmarks under Huber contamination.

Normal rows come from one of five settings; a tight Gaussian cluster of
anomalies is then placed just outside the normal cloud in Mahalanobis terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

SETTINGS = ("mvn_a09", "mvn_hcn", "ell_t", "exp", "mv_sk")
SKEW_ALPHA = 10.0
CLUSTER_VAR = 1.0 / 20.0
MAHAL_FACTOR = 1.25


@dataclass(frozen=True)
class SimulationSpec:
    setting: str
    n: int
    d: int
    eps: float
    seed: int
    df: int = 5
    signed: bool = True

    def __post_init__(self):
        if self.setting not in SETTINGS:
            raise InvalidInputError(f"unknown setting {self.setting!r}; "
                                    f"choose from {', '.join(SETTINGS)}")
        if self.n < 1 or self.d < 1:
            raise InvalidInputError("n and d must be positive")
        if not 0.0 <= self.eps < 1.0:
            raise InvalidInputError("eps must lie in [0, 1)")
        if self.setting == "mv_sk" and self.d != 2:
            raise InvalidInputError("the skew-normal setting is bivariate (d = 2)")
        if self.setting == "ell_t" and self.df < 1:
            raise InvalidInputError("degrees of freedom must be >= 1")


@dataclass(frozen=True)
class LabeledDataset:
    data: np.ndarray
    labels: np.ndarray
    anomaly_center: np.ndarray
    normal_cov: np.ndarray

    @property
    def n_anomalies(self) -> int:
        return int(self.labels.sum())


def huber_counts(n: int, eps: float) -> tuple[int, int]:
    """``(floor(n (1 - eps)), ceil(n eps))``; the two always add up to ``n``."""
    # rounding guards against 1000 * 0.05 landing a hair above 50
    n_anom = math.ceil(round(n * eps, 9))
    return n - n_anom, n_anom


def toeplitz_a09(d: int, signed: bool = True) -> np.ndarray:
    """Toeplitz correlation ``rho^|i-j|`` with ``rho = -0.9`` (or ``0.9``)."""
    if d < 1:
        raise InvalidInputError("d must be >= 1")
    rho = -0.9 if signed else 0.9
    idx = np.arange(d)
    return rho ** np.abs(idx[:, None] - idx[None, :]).astype(float)


def _condition(M: np.ndarray) -> float:
    w = np.linalg.eigvalsh(M)
    return float(w[-1] / w[0])


def hcn_cov(d: int, cond: float = 100.0, rng: np.random.Generator | None = None,
            max_iter: int = 500) -> np.ndarray:
    """Random correlation matrix with condition number ``cond`` (within 1%).

    A random orthogonal basis receives geometrically spaced eigenvalues with
    ratio ``cond``; the matrix is rescaled to unit diagonal, and the
    eigenvalue assignment is repeated on the new eigenvectors until the
    condition number settles.
    """
    if d < 2 or cond <= 1:
        raise InvalidInputError("need d >= 2 and cond > 1")
    rng = rng or np.random.default_rng()
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    Q = Q * np.where(np.diag(R) < 0, -1.0, 1.0)
    lam = np.geomspace(1.0, cond, d)
    C = None
    for _ in range(max_iter):
        S = (Q * lam) @ Q.T
        s = np.sqrt(np.diag(S))
        C = S / np.outer(s, s)
        C = (C + C.T) / 2
        np.fill_diagonal(C, 1.0)
        if abs(_condition(C) - cond) <= 0.01 * cond:
            return C
        # eigh sorts ascending, matching the order of lam
        _, Q = np.linalg.eigh(C)
    raise RuntimeError(f"condition number did not converge (got {_condition(C):.3g})")


def _skew_normal(m: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    delta = alpha / math.sqrt(1.0 + alpha * alpha)
    z0 = np.abs(rng.standard_normal(m))
    z1 = rng.standard_normal(m)
    return delta * z0 + math.sqrt(1.0 - delta * delta) * z1


def gen_normal(spec: SimulationSpec, rng: np.random.Generator,
               return_cov: bool = False):
    """Draw the ``floor(n (1 - eps))`` normal rows of ``spec``.

    With ``return_cov`` also returns the population scatter used: the
    covariance for the Gaussian settings, the scatter matrix for the
    elliptical t, ``diag(scale^2)`` for exponentials and the exact
    covariance of the skew-normal pair.
    """
    m, _ = huber_counts(spec.n, spec.eps)
    d = spec.d
    if spec.setting in ("mvn_a09", "mvn_hcn"):
        cov = toeplitz_a09(d, spec.signed) if spec.setting == "mvn_a09" \
            else hcn_cov(d, 100.0, rng)
        X = rng.standard_normal((m, d)) @ np.linalg.cholesky(cov).T
    elif spec.setting == "ell_t":
        cov = toeplitz_a09(d, spec.signed)
        U = rng.standard_normal((m, d))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        R = rng.standard_t(spec.df, size=m)
        X = (U * R[:, None]) @ np.linalg.cholesky(cov).T
    elif spec.setting == "exp":
        scale = rng.uniform(0.1, 1.0, size=d)
        cov = np.diag(scale ** 2)
        X = rng.exponential(scale, size=(m, d))
    else:
        delta = SKEW_ALPHA / math.sqrt(1.0 + SKEW_ALPHA ** 2)
        cov = np.diag([1.0 - 2.0 * delta ** 2 / math.pi, 0.25])
        X = np.column_stack([_skew_normal(m, SKEW_ALPHA, rng),
                             0.5 * rng.standard_normal(m)])
    return (X, cov) if return_cov else X


def mahalanobis_frame(normal: np.ndarray):
    """Sample mean, covariance, its eigen-decomposition and the largest
    Mahalanobis distance of the rows."""
    X = np.asarray(normal, dtype=float)
    mean = X.mean(axis=0)
    S = np.atleast_2d(np.cov(X, rowvar=False))
    w, V = np.linalg.eigh(S)
    if w[0] <= 1e-12 * max(w[-1], 1e-300):
        raise InvalidInputError("sample covariance of the normal rows is singular")
    C = X - mean
    md = np.sqrt(np.einsum("ij,ij->i", C, np.linalg.solve(S, C.T).T))
    return mean, S, w, V, float(md.max())


def _fix_sign(v: np.ndarray) -> np.ndarray:
    return v if v[np.argmax(np.abs(v))] > 0 else -v


def contaminate(normal, eps: float, rng: np.random.Generator, n: int | None = None,
                placement: str = "last_pc", gamma: float = 1.0,
                sector_halfangle: float = 45.0,
                normal_cov: np.ndarray | None = None) -> LabeledDataset:
    """Append a cluster of anomalies drawn from ``N(mu, I / 20)``.

    ``placement="last_pc"`` puts ``mu`` on the smallest-variance principal
    axis of the normal rows at Mahalanobis distance 1.25 times the largest
    one among them.  ``placement="sector"`` (bivariate only) picks a random
    direction within ``sector_halfangle`` degrees of the second axis, on the
    positive side of the first, at Mahalanobis distance ``gamma`` times the
    largest one.  Distances use the sample mean and covariance of ``normal``.

    Args:
        n: total sample size; inferred from ``len(normal)`` and ``eps`` if omitted.
        normal_cov: population scatter to record; defaults to the sample one.
    """
    X = np.asarray(normal, dtype=float)
    if not 0.0 <= eps < 1.0:
        raise InvalidInputError("eps must lie in [0, 1)")
    d = X.shape[1]
    if X.shape[0] < d + 1:
        raise InvalidInputError(f"need at least {d + 1} normal rows, got {X.shape[0]}")
    if n is None:
        # smallest total whose Huber split keeps exactly these normal rows
        n = X.shape[0] + huber_counts(int(X.shape[0] / (1.0 - eps)), eps)[1]
        while huber_counts(n, eps)[0] > X.shape[0]:
            n -= 1
        while huber_counts(n, eps)[0] < X.shape[0]:
            n += 1
    n_norm, n_anom = huber_counts(n, eps)
    if n_norm != X.shape[0]:
        raise InvalidInputError(
            f"{X.shape[0]} normal rows do not match n={n}, eps={eps}")
    mean, S, w, V, maxmd = mahalanobis_frame(X)
    if placement == "last_pc":
        v = _fix_sign(V[:, 0])
        mu = mean + MAHAL_FACTOR * maxmd * math.sqrt(w[0]) * v
    elif placement == "sector":
        if d != 2:
            raise InvalidInputError("sector placement is bivariate")
        psi = math.radians(sector_halfangle) * rng.random()
        up = 1.0 if rng.random() < 0.5 else -1.0
        v = np.array([math.sin(psi), up * math.cos(psi)])
        mu = mean + gamma * maxmd * v / math.sqrt(v @ np.linalg.solve(S, v))
    else:
        raise InvalidInputError(f"unknown placement {placement!r}")
    cov = S if normal_cov is None else np.asarray(normal_cov, dtype=float)
    if n_anom == 0:
        return LabeledDataset(X.copy(), np.zeros(n_norm, dtype=bool), mu, cov)
    anomalies = mu + math.sqrt(CLUSTER_VAR) * rng.standard_normal((n_anom, d))
    data = np.vstack([X, anomalies])
    labels = np.r_[np.zeros(n_norm, dtype=bool), np.ones(n_anom, dtype=bool)]
    perm = rng.permutation(n)
    return LabeledDataset(data[perm], labels[perm], mu, cov)


def simulate(spec: SimulationSpec, **placement) -> LabeledDataset:
    """Normal rows of ``spec`` plus a contaminating cluster, reproducible by seed."""
    rng = np.random.default_rng(spec.seed)
    X, cov = gen_normal(spec, rng, return_cov=True)
    return contaminate(X, spec.eps, rng, n=spec.n, normal_cov=cov, **placement)


def ordered_importance_dataset(n: int, d: int, seed: int, eps: float = 0.1,
                               base: str = "spherical") -> LabeledDataset:
    """Anomalies at ``((2d)^2, (2(d-1))^2, ..., 2^2)`` with spread ``I / 1000``.

    Variable importance therefore decreases with the column index.  ``base``
    is ``"spherical"`` (standard normal) or ``"mvn_a09"``.
    """
    rng = np.random.default_rng(seed)
    n_norm, n_anom = huber_counts(n, eps)
    cov = np.eye(d) if base == "spherical" else toeplitz_a09(d)
    X = rng.standard_normal((n_norm, d)) @ np.linalg.cholesky(cov).T
    mu = (2.0 * np.arange(d, 0, -1)) ** 2
    anomalies = mu + math.sqrt(1e-3) * rng.standard_normal((n_anom, d))
    data = np.vstack([X, anomalies])
    labels = np.r_[np.zeros(n_norm, dtype=bool), np.ones(n_anom, dtype=bool)]
    perm = rng.permutation(n)
    return LabeledDataset(data[perm], labels[perm], mu, cov)
