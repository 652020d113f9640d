"""Univariate robust statistics and the univariate depth kernels.

Multivariate projection depth reduces to these functions along a direction,
so they are written for exactness rather than speed; the compiled
counterparts used inside the optimizers live in :mod:`aca._kernels`.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

__all__ = ["median", "mad", "mad_plus", "depth1_pd", "depth1_apd"]


def _as_sample(sample) -> np.ndarray:
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise InvalidInputError("sample must contain at least one value")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("sample contains non-finite values")
    return x


def _median(x: np.ndarray) -> float:
    n = x.size
    k = n // 2
    if n % 2:
        return float(np.partition(x, k)[k])
    part = np.partition(x, (k - 1, k))
    return float((part[k - 1] + part[k]) / 2.0)


def median(sample) -> float:
    """Sample median; the even-length case averages the two middle values.

    >>> median([2, 1, 3]), median([1, 2, 3, 4])
    (2.0, 2.5)
    """
    return _median(_as_sample(sample))


def mad(sample) -> float:
    """Median absolute deviation from the median (unscaled)."""
    x = _as_sample(sample)
    return _median(np.abs(x - _median(x)))


def mad_plus(sample) -> float:
    """Median of the deviations of points lying strictly above the median.

    Returns 0.0 when no point exceeds the median.
    """
    x = _as_sample(sample)
    med = _median(x)
    pos = x[x > med] - med
    if pos.size == 0:
        return 0.0
    return _median(pos)


def _ratio_depth(num: float, spread: float) -> float:
    # Zero spread: the limit of 1 / (num / s + 1) as s -> 0.
    if spread == 0.0:
        return 1.0 if num == 0.0 else 0.0
    return 1.0 / (num / spread + 1.0)


def depth1_pd(z: float, sample) -> float:
    """Univariate projection depth ``1 / (|z - med| / MAD + 1)``."""
    x = _as_sample(sample)
    med = _median(x)
    num = abs(float(z) - med)
    if num == 0.0:
        return 1.0
    return _ratio_depth(num, _median(np.abs(x - med)))


def depth1_apd(z: float, sample) -> float:
    """Univariate asymmetric projection depth ``1 / ((z - med)+ / MAD+ + 1)``."""
    x = _as_sample(sample)
    med = _median(x)
    num = max(float(z) - med, 0.0)
    if num == 0.0:
        return 1.0
    pos = x[x > med] - med
    spread = _median(pos) if pos.size else 0.0
    return _ratio_depth(num, spread)
