"""Approximate projection depth restricted to a subspace.

The depth of ``z`` inside ``span(B)`` is the minimum over unit ``u`` in that
span of the univariate depth of ``z @ u`` among ``X @ u``.  Any direction
visited gives an upper bound, so every value reported here approximates the
exact depth from above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidInputError
from .optimize import OptimizerConfig, initial_simplices, nm_batch, nm_search, rrs_search
from .robust_stats import depth1_apd, depth1_pd
from .subspace import as_basis


class DepthNotion(str, Enum):
    PD = "pd"
    APD = "apd"

    @classmethod
    def parse(cls, value) -> "DepthNotion":
        if isinstance(value, cls):
            return value
        aliases = {"projection": cls.PD, "asymmetric_projection": cls.APD}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            raise InvalidInputError(f"unknown depth notion {value!r}") from None


@dataclass(frozen=True)
class DepthResult:
    depth: float
    direction: np.ndarray
    evaluations_used: int
    history: np.ndarray | None = field(default=None, repr=False, compare=False)


def as_data(data, min_rows: int = 2) -> np.ndarray:
    X = np.asarray(data, dtype=float)
    if X.ndim != 2:
        raise InvalidInputError(f"data must be a 2-D array, got shape {X.shape}")
    if X.shape[0] < min_rows:
        raise InvalidInputError(f"data needs at least {min_rows} rows, got {X.shape[0]}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("data contains non-finite values")
    return X


def depth1(z: float, sample, notion) -> float:
    """Univariate depth under ``notion``."""
    if DepthNotion.parse(notion) is DepthNotion.PD:
        return depth1_pd(z, sample)
    return depth1_apd(z, sample)


def _middle(part: np.ndarray, k: int, odd: bool) -> np.ndarray:
    # median of each row of an array partitioned at k = n // 2
    if odd:
        return part[:, k].copy()
    return (part[:, :k].max(axis=1) + part[:, k]) / 2.0


def depth_batch(U: np.ndarray, zt: np.ndarray, XT: np.ndarray, notion,
                block: int = 64) -> np.ndarray:
    """Univariate depths for many directions at once.

    Args:
        U: ``(m, d)`` directions.
        zt: ``(m,)`` projections of the query point(s) on those directions.
        XT: ``(d, n)`` transposed data.
        block: rows processed together; keeps the working set in cache.

    Returns:
        ``(m,)`` depths, equal to :func:`depth1` along each direction.
    """
    notion = DepthNotion.parse(notion)
    m = U.shape[0]
    n = XT.shape[1]
    k = n // 2
    odd = bool(n % 2)
    num = np.empty(m)
    spread = np.empty(m)
    for lo in range(0, m, block):
        sl = slice(lo, min(lo + block, m))
        Y = U[sl] @ XT
        if notion is DepthNotion.PD:
            # partitioning permutes each row in place; the multiset is kept
            Y.partition(k, axis=1)
            med = _middle(Y, k, odd)
            num[sl] = np.abs(zt[sl] - med)
            np.subtract(Y, med[:, None], out=Y)
            np.abs(Y, out=Y)
            Y.partition(k, axis=1)
            spread[sl] = _middle(Y, k, odd)
        else:
            Y.sort(axis=1)
            med = Y[:, k] if odd else (Y[:, k - 1] + Y[:, k]) / 2.0
            num[sl] = np.maximum(zt[sl] - med, 0.0)
            cnt = (Y > med[:, None]).sum(axis=1)
            first = n - cnt
            a = np.minimum(first + (cnt - 1) // 2, n - 1)
            b = np.minimum(first + cnt // 2, n - 1)
            rows = np.arange(Y.shape[0])
            sp = ((Y[rows, a] - med) + (Y[rows, b] - med)) / 2.0
            sp[cnt == 0] = 0.0
            spread[sl] = sp
    out = np.ones(m)
    pos = num > 0
    safe = pos & (spread > 0)
    out[safe] = 1.0 / (num[safe] / spread[safe] + 1.0)
    out[pos & ~safe] = 0.0
    return out


def _unit_rows(T: np.ndarray, B: np.ndarray) -> np.ndarray:
    U = T @ B.T
    return U / np.linalg.norm(U, axis=1, keepdims=True)


def proj_depth(z, data, basis=None, notion="pd",
               config: OptimizerConfig | None = None,
               rng: np.random.Generator | None = None) -> DepthResult:
    """Approximate depth of ``z`` w.r.t. ``data`` over directions in ``span(basis)``.

    ``basis`` defaults to the identity (unrestricted depth).  The generator
    defaults to one seeded with ``config.seed``.
    """
    X = as_data(data)
    d = X.shape[1]
    z = np.asarray(z, dtype=float).ravel()
    if z.size != d or not np.all(np.isfinite(z)):
        raise InvalidInputError(f"z must be a finite vector of length {d}")
    B = np.eye(d) if basis is None else as_basis(basis, d)
    if B.shape[1] == 0:
        raise InvalidInputError("search basis must have rank >= 1")
    notion = DepthNotion.parse(notion)
    config = config or OptimizerConfig()
    rng = np.random.default_rng(config.seed) if rng is None else rng
    XT = np.ascontiguousarray(X.T)

    def evaluate(T, _idx):
        U = _unit_rows(T, B)
        return depth_batch(U, U @ z, XT, notion)

    toward = B.T @ (z - X.mean(axis=0))
    runner = nm_search if config.algorithm == "nelder_mead_sphere" else rrs_search
    res = runner(evaluate, B.shape[1], config, rng, toward)
    u = _unit_rows(res.coords[None], B)[0]
    return DepthResult(res.value, u, res.evaluations, res.history)


def row_seed(seed: int, *key: int) -> np.random.Generator:
    """Generator derived from ``seed`` and an integer key (e.g. component, row)."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))


def dataset_depths(data, basis=None, notion="pd",
                   config: OptimizerConfig | None = None, key: int = 0):
    """Approximate restricted depth of every row of ``data`` w.r.t. ``data``.

    Row ``j`` uses a generator derived from ``(config.seed, key, j)`` so the
    result does not depend on evaluation order.

    Returns:
        ``(depths, directions, evaluations)`` with shapes ``(n,)``, ``(n, d)``
        and ``(n,)``.
    """
    X = as_data(data)
    n, d = X.shape
    B = np.eye(d) if basis is None else as_basis(basis, d)
    r = B.shape[1]
    if r == 0:
        raise InvalidInputError("search basis must have rank >= 1")
    notion = DepthNotion.parse(notion)
    config = config or OptimizerConfig()
    XT = np.ascontiguousarray(X.T)
    towards = (X - X.mean(axis=0)) @ B

    if r == 1 or config.algorithm == "refined_random_search":
        depths = np.empty(n)
        dirs = np.empty((n, d))
        evals = np.empty(n, dtype=np.int64)
        for j in range(n):
            res = proj_depth(X[j], X, B, notion, config, row_seed(config.seed, key, j))
            depths[j], dirs[j], evals[j] = res.depth, res.direction, res.evaluations_used
        return depths, dirs, evals

    sims = np.stack([
        initial_simplices(r, config, row_seed(config.seed, key, j), towards[j])
        for j in range(n)
    ])

    def evaluate(T, idx):
        U = _unit_rows(T, B)
        return depth_batch(U, np.einsum("ij,ij->i", U, X[idx]), XT, notion)

    depths, coords, evals, _ = nm_batch(evaluate, sims, config)
    return depths, _unit_rows(coords, B), evals


def min_depth_over_dataset(data, basis=None, notion="pd",
                           config: OptimizerConfig | None = None,
                           key: int = 0) -> tuple[int, DepthResult]:
    """Row of ``data`` with the smallest approximate restricted depth.

    Ties go to the lowest row index.
    """
    depths, dirs, evals = dataset_depths(data, basis, notion, config, key)
    j = int(np.argmin(depths))
    return j, DepthResult(float(depths[j]), dirs[j], int(evals[j]))


def _plane_depths(theta: np.ndarray, X: np.ndarray, z: np.ndarray,
                  notion: DepthNotion) -> np.ndarray:
    U = np.column_stack([np.cos(theta), np.sin(theta)])
    Y = U @ X.T
    zt = U @ z
    med = np.median(Y, axis=1)
    if notion is DepthNotion.PD:
        num = np.abs(zt - med)
        spread = np.median(np.abs(Y - med[:, None]), axis=1)
    else:
        num = np.maximum(zt - med, 0.0)
        D = np.where(Y > med[:, None], Y - med[:, None], np.nan)
        with np.errstate(all="ignore"):
            spread = np.nanmedian(D, axis=1)
        spread = np.nan_to_num(spread, nan=0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(num == 0, 1.0,
                        np.where(spread > 0, 1.0 / (num / spread + 1.0), 0.0))


def grid_depth_oracle(z, data, notion="pd", angles: int = 36000,
                      refine: int = 0, keep: int = 16) -> float:
    """Brute-force depth in the plane over equally spaced directions.

    Uses ``angles`` directions on ``[0, pi)`` for the symmetric notion and on
    ``[0, 2 pi)`` for the asymmetric one.  A grid can only bound the depth
    from above, and the true minimum usually falls between two grid angles.
    With ``refine > 0`` the ``keep`` best grid angles are each zoomed into
    ``refine`` times, every zoom laying 2001 angles over the two neighbouring
    cells of the previous level, which pins the minimum down to far below
    the grid spacing.
    """
    X = np.asarray(data, dtype=float)
    if X.ndim != 2 or X.shape[1] != 2:
        raise InvalidInputError("grid oracle needs two-dimensional data")
    if angles < 4:
        raise InvalidInputError("grid oracle needs at least 4 angles")
    notion = DepthNotion.parse(notion)
    z = np.asarray(z, dtype=float).ravel()
    span = np.pi if notion is DepthNotion.PD else 2 * np.pi
    theta = span * np.arange(angles) / angles
    dep = np.concatenate([_plane_depths(c, X, z, notion)
                          for c in np.array_split(theta, max(1, angles // 2000))])
    best = float(dep.min())
    if refine <= 0:
        return best
    step = span / angles
    for t0 in theta[np.argsort(dep, kind="stable")[:keep]]:
        center, h = float(t0), step
        for _ in range(refine):
            local = center + np.linspace(-h, h, 2001)
            vals = _plane_depths(local, X, z, notion)
            k = int(np.argmin(vals))
            best = min(best, float(vals[k]))
            center, h = float(local[k]), 2 * h / 2000
    return best
