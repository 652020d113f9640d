"""Derivative-free minimization over the unit sphere of a subspace.

Two searches are provided: a spherical Nelder-Mead whose moves follow great
circles, and a refined random search sampling shrinking caps around the
incumbent.  Both run over coordinate vectors ``t`` of a search basis ``B`` and
report directions ``u = B t``, so the search never leaves ``span(B)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import _kernels
from .errors import InvalidInputError
from .subspace import as_basis, random_unit, sample_cap

ALGORITHMS = ("nelder_mead_sphere", "refined_random_search")
STARTS = ("mixed", "Mn", "Rn")


@dataclass(frozen=True)
class OptimizerConfig:
    """Parameters of a restricted depth search.

    ``budget_k`` is the total number of univariate-depth evaluations allowed
    per query point, split as evenly as possible over ``restarts``.  The
    starting simplex is drawn in a cap of radius ``(pi / 2) / beta`` around the
    start direction.  ``start="mixed"`` uses the direction from the data mean
    to the query for the first restart and random directions afterwards.
    """

    algorithm: str = "nelder_mead_sphere"
    budget_k: int = 1000
    restarts: int = 10
    beta: float = 6.0
    alpha: float = 1.0
    gamma: float = 2.0
    rho: float = 0.5
    sigma: float = 0.5
    tol: float = 1e-6
    start: str = "mixed"
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidInputError(f"unknown algorithm {self.algorithm!r}")
        if self.start not in STARTS:
            raise InvalidInputError(f"unknown start rule {self.start!r}")
        if not (self.restarts >= 1 and self.budget_k >= self.restarts):
            raise InvalidInputError("need budget_k >= restarts >= 1")
        if not (0 < self.rho < 1 < self.gamma):
            raise InvalidInputError("need 0 < rho < 1 < gamma")
        if not (0 < self.sigma < 1):
            raise InvalidInputError("need 0 < sigma < 1")
        if not (self.alpha > 0 and self.beta > 0 and self.tol > 0):
            raise InvalidInputError("alpha, beta and tol must be positive")

    @property
    def cap_radius(self) -> float:
        return (np.pi / 2) / self.beta

    def restart_budgets(self) -> np.ndarray:
        base, extra = divmod(int(self.budget_k), int(self.restarts))
        out = np.full(self.restarts, base, dtype=np.int64)
        out[:extra] += 1
        return out

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "OptimizerConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


class SearchResult(NamedTuple):
    value: float
    coords: np.ndarray
    evaluations: int
    history: np.ndarray


def start_centers(r: int, config: OptimizerConfig, rng: np.random.Generator,
                  toward: np.ndarray | None = None) -> np.ndarray:
    """One start direction per restart, shape ``(restarts, r)``."""
    if toward is not None:
        nrm = np.linalg.norm(toward)
        toward = toward / nrm if nrm > 1e-12 else None
    out = np.empty((config.restarts, r))
    for s in range(config.restarts):
        use_mn = toward is not None and (
            config.start == "Mn" or (config.start == "mixed" and s == 0))
        out[s] = toward if use_mn else random_unit(r, rng)
    return out


def initial_simplices(r: int, config: OptimizerConfig, rng: np.random.Generator,
                      toward: np.ndarray | None = None) -> np.ndarray:
    """Starting vertices ``(restarts, r, r)``, each simplex inside a cap."""
    centers = start_centers(r, config, rng, toward)
    return np.stack([sample_cap(c, config.cap_radius, r, rng) for c in centers])


BatchObjective = Callable[[np.ndarray, np.ndarray], np.ndarray]


def nm_batch(evaluate: BatchObjective, sims: np.ndarray, config: OptimizerConfig,
             keep_history: bool = False):
    """Run one spherical Nelder-Mead per query, all in lockstep.

    Args:
        evaluate: ``evaluate(T, idx)`` returns objective values for coordinate
            vectors ``T[m]`` requested by queries ``idx[m]``.
        sims: ``(Q, restarts, r, r)`` starting vertices with ``r >= 2``.

    Returns:
        ``(best_values, best_coords, evaluations, history)``.
    """
    Q, R, r, _ = sims.shape
    budgets = config.restart_budgets()
    T = np.zeros((Q, r))
    P = np.zeros((Q, r, r))
    F = np.zeros((Q, r))
    XO = np.zeros((Q, r))
    XR = np.zeros((Q, r))
    FR = np.zeros(Q)
    phase = np.zeros(Q, dtype=np.int64)
    vidx = np.zeros(Q, dtype=np.int64)
    restart = np.zeros(Q, dtype=np.int64)
    spent = np.zeros(Q, dtype=np.int64)
    used = np.zeros(Q, dtype=np.int64)
    best_f = np.full(Q, np.inf)
    best_t = sims[:, 0, 0, :].copy()
    history = np.zeros((Q, int(budgets.sum()) if keep_history else 0))
    sims = np.ascontiguousarray(sims, dtype=float)

    _kernels.nm_begin(sims, budgets, phase, vidx, restart, spent, T)
    active = np.flatnonzero(phase != _kernels.DONE)
    while active.size:
        values = np.ascontiguousarray(evaluate(T[active], active), dtype=float)
        _kernels.nm_advance(active, values, T, P, F, XO, XR, FR, phase, vidx,
                            restart, spent, used, best_f, best_t, history,
                            sims, budgets, config.alpha, config.gamma,
                            config.rho, config.sigma, config.tol)
        active = active[phase[active] != _kernels.DONE]
    history = [h[:u] for h, u in zip(history, used)] if keep_history else None
    return best_f, best_t, used, history


def _two_signs(evaluate: BatchObjective) -> SearchResult:
    # a rank-one subspace has exactly two unit vectors
    vals = evaluate(np.array([[1.0], [-1.0]]), np.zeros(2, dtype=np.int64))
    j = 0 if vals[0] <= vals[1] else 1
    hist = np.minimum.accumulate(vals)
    return SearchResult(float(vals[j]), np.array([1.0 if j == 0 else -1.0]), 2, hist)


def nm_search(evaluate: BatchObjective, r: int, config: OptimizerConfig,
              rng: np.random.Generator, toward=None) -> SearchResult:
    """Single-query spherical Nelder-Mead over ``S^(r-1)``."""
    if r < 1:
        raise InvalidInputError("search basis must have rank >= 1")
    if r == 1:
        return _two_signs(evaluate)
    sims = initial_simplices(r, config, rng, toward)[None]
    f, t, used, hist = nm_batch(evaluate, sims, config, keep_history=True)
    return SearchResult(float(f[0]), t[0], int(used[0]), hist[0])


def rrs_search(evaluate: BatchObjective, r: int, config: OptimizerConfig,
               rng: np.random.Generator, toward=None) -> SearchResult:
    """Refined random search over ``S^(r-1)``.

    Each restart evaluates its start, then repeatedly samples a batch of
    ``max(2r, 10)`` directions in a cap around the incumbent, moving to the
    best one if it improves; the cap radius starts at pi/2 and is multiplied
    by ``sigma`` after every batch.
    """
    if r < 1:
        raise InvalidInputError("search basis must have rank >= 1")
    if r == 1:
        return _two_signs(evaluate)
    batch = max(2 * r, 10)
    idx0 = np.zeros(1, dtype=np.int64)
    best_v, best_t = np.inf, None
    hist = []
    centers = start_centers(r, config, rng, toward)
    for s, budget in enumerate(config.restart_budgets()):
        if budget <= 0:
            continue
        inc = centers[s]
        f_inc = float(evaluate(inc[None], idx0)[0])
        remaining = int(budget) - 1
        if f_inc < best_v:
            best_v, best_t = f_inc, inc
        hist.append(best_v)
        radius = np.pi / 2
        while remaining > 0:
            m = min(batch, remaining)
            cand = sample_cap(inc, radius, m, rng)
            vals = np.asarray(evaluate(cand, np.zeros(m, dtype=np.int64)), float)
            for j, v in enumerate(vals):
                if v < best_v:
                    best_v, best_t = float(v), cand[j]
                hist.append(best_v)
            j = int(np.argmin(vals))
            if vals[j] < f_inc:
                inc, f_inc = cand[j], float(vals[j])
            remaining -= m
            radius *= config.sigma
    return SearchResult(best_v, best_t, len(hist), np.asarray(hist))


def _search(objective: Callable[[np.ndarray], float], basis, config, rng, toward,
            runner) -> tuple[float, np.ndarray]:
    B = as_basis(basis)
    if B.shape[1] == 0:
        raise InvalidInputError("search basis must have rank >= 1")
    rng = np.random.default_rng(config.seed) if rng is None else rng

    def evaluate(T, _idx):
        return np.array([objective(B @ t) for t in T])

    res = runner(evaluate, B.shape[1], config, rng, toward)
    u = B @ res.coords
    return res.value, u / np.linalg.norm(u)


def nelder_mead_sphere(objective: Callable[[np.ndarray], float], basis,
                       config: OptimizerConfig | None = None,
                       rng: np.random.Generator | None = None,
                       toward: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Minimize ``objective(u)`` over unit vectors ``u`` in ``span(basis)``.

    Args:
        objective: function of an ambient unit vector.
        basis: ``(d, r)`` orthonormal columns.
        config: search parameters; defaults to :class:`OptimizerConfig()`.
        rng: generator for the starting simplices; seeded from
            ``config.seed`` when omitted.
        toward: optional basis coordinates of a preferred start direction
            (used by ``start="Mn"`` and the first restart of ``"mixed"``).

    Returns:
        ``(best_value, best_direction)``.
    """
    config = config or OptimizerConfig()
    return _search(objective, basis, config, rng, toward, nm_search)


def refined_random_search(objective: Callable[[np.ndarray], float], basis,
                          config: OptimizerConfig | None = None,
                          rng: np.random.Generator | None = None,
                          toward: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Same contract as :func:`nelder_mead_sphere`, using refined random search."""
    config = config or OptimizerConfig(algorithm="refined_random_search")
    return _search(objective, basis, config, rng, toward, rrs_search)
