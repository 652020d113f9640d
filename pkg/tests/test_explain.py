import numpy as np
import pytest
from hypothesis import given, strategies as st

import aca.explain as explain
from aca import (AcaModel, DepthResult, InvalidInputError, OptimizerConfig, SimulationSpec,
                 cell_scores, component_loadings, fit, proj_depth, variable_importance)
from aca.datagen import gen_normal


def model_with(*columns):
    A = np.column_stack(columns).astype(float)
    p = A.shape[1]
    return AcaModel(A.shape[0], A, np.full(p, 0.5), np.zeros(p, dtype=np.int64))


def test_axis_component_takes_full_share():
    e = np.eye(6)
    rep = component_loadings(model_with(e[:, 4]), 1)
    assert rep.component == 1
    assert rep.entries[0] == (4, 1.0, 1.0)
    assert all(s == 0.0 for _, _, s in rep.entries[1:])


def test_tie_goes_to_lower_variable():
    s = 1 / np.sqrt(2)
    rep = component_loadings(model_with(np.array([s, s, 0.0])), 1)
    assert [v for v, _, _ in rep.top(2)] == [0, 1]
    assert rep.shares[:2] == pytest.approx([0.5, 0.5], abs=1e-15)


def test_out_of_range_component():
    m = model_with(np.eye(3)[:, 0])
    for i in (0, 2):
        with pytest.raises(InvalidInputError):
            component_loadings(m, i)


def test_shares_match_fitted_coordinates():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((150, 6)) @ np.linalg.cholesky(
        np.fromfunction(lambda i, j: (-0.9) ** abs(i - j), (6, 6))).T
    model = fit(X, 2, config=OptimizerConfig(budget_k=300, seed=2))
    for i in (1, 2):
        rep = component_loadings(model, i)
        u = model.components[:, i - 1]
        expect = np.abs(u) / np.abs(u).sum()
        assert np.allclose(rep.shares, expect[rep.variables], atol=1e-12, rtol=0)
        assert np.array_equal(rep.loadings, u[rep.variables])
        assert abs(rep.shares.sum() - 1.0) < 1e-9
        assert np.all(np.diff(np.abs(rep.loadings)) <= 0)


def test_importance_of_axis_component():
    assert list(variable_importance(model_with(np.eye(4)[:, 2]))) == [2, 0, 1, 3]


@given(st.integers(0, 2**32 - 1))
def test_importance_relabeling_and_sign_invariance(seed):
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(7)
    u /= np.linalg.norm(u)
    rank = variable_importance(model_with(u))
    # reversed variables give the reversed labels
    rev = variable_importance(model_with(u[::-1]))
    assert list(rev) == [6 - v for v in rank]
    flips = np.where(rng.random(7) < 0.5, -1.0, 1.0)
    assert np.array_equal(variable_importance(model_with(u * flips)), rank)


def test_cell_scores_zero_at_center():
    rng = np.random.default_rng(1)
    v = rng.standard_normal((20, 3))
    X = np.vstack([np.zeros(3), v, -v])
    assert np.array_equal(cell_scores(np.zeros(3), X), np.zeros(3))


def test_cell_scores_follow_direction_mask(monkeypatch):
    def fake(y, X, B, notion, cfg):
        if notion == "pd":
            return DepthResult(0.2, np.array([0.0, 1.0, 0.0]), 1)
        return DepthResult(0.25, np.array([0.0, 1.0, 0.0]), 1)

    monkeypatch.setattr(explain, "proj_depth", fake)
    s = cell_scores(np.ones(3), np.zeros((4, 3)))
    assert np.array_equal(s, [0.0, 3.0, 0.0])


def test_cell_scores_formula_and_range():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((120, 3))
    cfg = OptimizerConfig(budget_k=400, seed=8)
    for _ in range(4):
        y = 2 * rng.standard_normal(3)
        s = cell_scores(y, X, cfg)
        u = proj_depth(y, X, None, "pd", cfg).direction
        d_apd = proj_depth(y, X, None, "apd", cfg).depth
        assert np.allclose(s, np.abs(u) * (1 / d_apd - 1), rtol=0, atol=1e-15)
        assert np.all(s >= 0)


def test_zero_asymmetric_depth_gives_infinite_scores():
    X = np.zeros((5, 2))
    s = cell_scores(np.array([1.0, 0.0]), X)
    assert np.isinf(s).any()
    assert np.all(s[np.isfinite(s)] == 0)


def test_skewed_setting_planted_second_variable():
    rng = np.random.default_rng(5)
    X = gen_normal(SimulationSpec("mv_sk", 600, 2, 0.0, 5), rng)
    y = np.median(X, axis=0) + np.array([0.0, 2.5])
    s = cell_scores(y, X, OptimizerConfig(seed=5))
    assert s[1] > s[0]


def test_cell_scores_permutation_equivariant():
    rng = np.random.default_rng(9)
    X = rng.standard_normal((200, 2)) * [1.0, 2.0]
    y = np.array([2.5, 1.0])
    a = cell_scores(y, X)
    b = cell_scores(y[::-1], X[:, ::-1])
    assert b[::-1] == pytest.approx(a, rel=0.05)
