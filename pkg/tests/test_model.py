import numpy as np
import pytest

from aca import InvalidInputError, OptimizerConfig, auc, fit, transform
from aca.depth import depth1
from aca.model import orient

from conftest import planted_two_groups

FAST = OptimizerConfig(budget_k=300, restarts=5, seed=11)


def test_full_rank_fit_is_orthonormal(rng):
    X = rng.standard_normal((60, 4))
    model = fit(X, 4, config=FAST)
    A = model.components
    assert A.shape == (4, 4)
    assert np.max(np.abs(A.T @ A - np.eye(4))) < 1e-8
    # an orthogonal map keeps every pairwise distance
    Y = transform(model, X)
    dX = np.linalg.norm(X[:, None] - X[None], axis=2)
    dY = np.linalg.norm(Y[:, None] - Y[None], axis=2)
    assert np.max(np.abs(dX - dY)) < 1e-8


@pytest.mark.parametrize("notion", ["pd", "apd"])
def test_model_invariants(rng, notion):
    X = rng.standard_normal((80, 5)) @ rng.standard_normal((5, 5))
    model = fit(X, 3, notion, FAST)
    A = model.components
    assert model.n_components == 3 and model.ambient_dim == 5
    for i in range(3):
        u = A[:, i]
        assert np.all(np.abs(A[:, :i].T @ u) < 1e-8)
        proj = X @ u
        anchor = X[model.anchor_rows[i]]
        assert anchor @ u >= np.median(proj)
        assert abs(model.min_depths[i] - depth1(anchor @ u, proj, notion)) < 1e-10
        assert 0.0 < model.min_depths[i] <= 1.0


def test_restricted_depths_not_below_unrestricted(rng):
    for _ in range(3):
        X = rng.standard_normal((70, 4))
        model = fit(X, 4, config=FAST)
        assert np.all(model.min_depths[1:] >= model.min_depths[0] - 0.02)


def test_determinism(rng):
    X = rng.standard_normal((50, 3))
    a, b = fit(X, 2, config=FAST), fit(X, 2, config=FAST)
    assert np.array_equal(a.components, b.components)
    assert np.array_equal(a.min_depths, b.min_depths)
    assert np.array_equal(a.anchor_rows, b.anchor_rows)


def test_scale_invariance(rng):
    X = rng.standard_normal((50, 3))
    a = fit(X, 2, config=FAST)
    # a power of two rescales every projection exactly
    b = fit(8.0 * X, 2, config=FAST)
    assert np.allclose(a.min_depths, b.min_depths, atol=1e-9)
    assert np.allclose(a.components, b.components, atol=1e-6)


def test_errors(rng):
    X = rng.standard_normal((10, 3))
    for p in (0, 4):
        with pytest.raises(InvalidInputError):
            fit(X, p)
    with pytest.raises(InvalidInputError):
        fit(X[:1], 1)
    bad = X.copy()
    bad[0, 0] = np.nan
    with pytest.raises(InvalidInputError):
        fit(bad, 1)
    model = fit(X, 1, config=FAST)
    with pytest.raises(InvalidInputError):
        transform(model, np.zeros((2, 4)))


def test_orient_rules():
    data = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    u = np.array([1.0, 0.0])
    assert np.array_equal(orient(u, data[2], data), u)
    assert np.array_equal(orient(u, data[0], data), -u)
    assert np.array_equal(orient(u, data[1], data), u)


def test_transform_of_component_row(rng):
    model = fit(rng.standard_normal((40, 3)), 3, config=FAST)
    s = transform(model, model.components[:, 0])
    assert np.allclose(s, [[1.0, 0.0, 0.0]], atol=1e-8)
    assert transform(model, np.zeros((0, 3))).shape == (0, 3)


def test_planted_groups_separate():
    X, group = planted_two_groups(seed=4)
    model = fit(X, 2, config=OptimizerConfig(seed=4))
    S = transform(model, X)
    assert auc(S[:, 0], group == 1) == 1.0
    assert auc(S[:, 1], group == 2) == 1.0
    assert model.min_depths[0] < model.min_depths[1]
    normal = group == 0
    assert np.all(S[group == 1, 0] > np.median(S[normal, 0]))


def test_callback_stops_early(rng):
    X = rng.standard_normal((30, 4))
    seen = []
    model = fit(X, 4, config=FAST, callback=lambda i, A: seen.append(A.shape[1]) or i == 2)
    assert seen == [1, 2]
    assert model.n_components == 2
