import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("aca", deadline=None, max_examples=60)
settings.load_profile("aca")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def univariate_depth(z, x, notion):
    """Pure-Python reference for the univariate depths (statistics module medians)."""
    import statistics
    med = statistics.median(x)
    if notion == "pd":
        num = abs(z - med)
        spread = statistics.median([abs(v - med) for v in x])
    else:
        num = max(z - med, 0.0)
        pos = [v - med for v in x if v > med]
        spread = statistics.median(pos) if pos else 0.0
    if num == 0:
        return 1.0
    if spread == 0:
        return 0.0
    return 1.0 / (num / spread + 1.0)


def planted_two_groups(seed, n=100, d=3, shifts=(8.0, 5.0), size=5, spread=0.2):
    """Normal cloud plus two tight anomaly groups along orthogonal directions.

    Returns ``(X, group)`` where ``group`` is 0 for normal rows and 1 or 2 for
    the anomaly groups; group 1 sits farther out and is the more abnormal.
    """
    rng = np.random.default_rng(seed)
    a, b = np.linalg.qr(rng.standard_normal((d, 2)))[0].T
    normal = rng.standard_normal((n - 2 * size, d))
    g1 = shifts[0] * a + spread * rng.standard_normal((size, d))
    g2 = shifts[1] * b + spread * rng.standard_normal((size, d))
    X = np.vstack([normal, g1, g2])
    group = np.r_[np.zeros(n - 2 * size, int), np.ones(size, int), np.full(size, 2)]
    perm = rng.permutation(n)
    return X[perm], group[perm]
