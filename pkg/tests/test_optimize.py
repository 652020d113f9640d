import numpy as np
import pytest

from aca import InvalidInputError, OptimizerConfig, nelder_mead_sphere, refined_random_search
from aca._kernels import geodesic_move
from aca.optimize import nm_search


def linear(c):
    c = np.asarray(c, dtype=float)
    return lambda u: float(u @ c)


def angle(a, b):
    return float(np.arccos(np.clip(a @ b / np.linalg.norm(a) / np.linalg.norm(b), -1, 1)))


def test_config_defaults_and_validation():
    cfg = OptimizerConfig()
    assert (cfg.budget_k, cfg.restarts, cfg.beta) == (1000, 10, 6.0)
    assert (cfg.alpha, cfg.gamma, cfg.rho, cfg.sigma, cfg.tol) == (1.0, 2.0, 0.5, 0.5, 1e-6)
    assert cfg.cap_radius == pytest.approx(np.pi / 12)
    assert cfg.restart_budgets().sum() == 1000
    assert list(OptimizerConfig(budget_k=13, restarts=4).restart_budgets()) == [4, 3, 3, 3]
    bad = [dict(restarts=0), dict(budget_k=5, restarts=6), dict(rho=1.0), dict(gamma=1.0),
           dict(sigma=0.0), dict(alpha=0.0), dict(start="Zz"), dict(algorithm="sgd")]
    for kw in bad:
        with pytest.raises(InvalidInputError):
            OptimizerConfig(**kw)
    assert OptimizerConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(InvalidInputError):
        OptimizerConfig.from_dict({**cfg.to_dict(), "extra": 1})


def test_geodesic_move_stays_on_sphere():
    rng = np.random.default_rng(3)
    for _ in range(50):
        xo, p = rng.standard_normal(4), rng.standard_normal(4)
        xo /= np.linalg.norm(xo)
        p /= np.linalg.norm(p)
        out = np.empty(4)
        for coef in (-1.0, 2.0, 0.5, -0.5):
            geodesic_move(xo, p, coef, out)
            assert abs(np.linalg.norm(out) - 1.0) < 1e-12
        # coefficient 1 lands on p itself, -1 reflects it through xo
        geodesic_move(xo, p, 1.0, out)
        assert np.allclose(out, p, atol=1e-10)
        geodesic_move(xo, p, -1.0, out)
        assert angle(out, xo) == pytest.approx(angle(p, xo), abs=1e-10)


@pytest.mark.parametrize("search", [nelder_mead_sphere, refined_random_search])
def test_linear_objective_full_sphere(search):
    rng = np.random.default_rng(5)
    c = rng.standard_normal(5)
    cfg = OptimizerConfig(algorithm="nelder_mead_sphere" if search is nelder_mead_sphere
                          else "refined_random_search", seed=1)
    val, u = search(linear(c), np.eye(5), cfg)
    assert val <= -np.linalg.norm(c) * 0.99
    assert abs(np.linalg.norm(u) - 1.0) < 1e-12


def test_nelder_mead_converges_to_linear_minimizer():
    # the stopping rule bounds the spread of values, so the angular error is
    # about sqrt(tol); a tight tol and one long restart show the convergence
    rng = np.random.default_rng(5)
    cfg = OptimizerConfig(restarts=1, tol=1e-12, seed=1)
    for _ in range(5):
        c = rng.standard_normal(5)
        val, u = nelder_mead_sphere(linear(c), np.eye(5), cfg)
        assert angle(u, -c) < 1e-3
        assert val == pytest.approx(-np.linalg.norm(c), rel=1e-9)


def test_restriction_to_span():
    c = np.array([1.0, -2.0, 5.0])
    basis = np.eye(3)[:, :2]
    val, u = nelder_mead_sphere(linear(c), basis, OptimizerConfig(seed=2))
    assert abs(u[2]) < 1e-10
    assert val == pytest.approx(-np.sqrt(5.0), abs=1e-6)


def test_budget_one_random_search():
    cfg = OptimizerConfig(algorithm="refined_random_search", budget_k=1, restarts=1, seed=4)
    seen = []

    def f(u):
        seen.append(u.copy())
        return float(u[0])

    val, u = refined_random_search(f, np.eye(3), cfg)
    assert len(seen) == 1
    assert val == seen[0][0]
    assert np.allclose(u, seen[0])


@pytest.mark.parametrize("algo", ["nelder_mead_sphere", "refined_random_search"])
def test_deterministic_under_seed(algo):
    c = np.array([0.3, -1.0, 2.0, 0.5])
    f = lambda u: float(np.sin(3 * u @ c))
    cfg = OptimizerConfig(algorithm=algo, budget_k=200, restarts=3, seed=9)
    assert nelder_mead_sphere(f, np.eye(4), cfg)[0] == nelder_mead_sphere(f, np.eye(4), cfg)[0]
    a = refined_random_search(f, np.eye(4), cfg)
    b = refined_random_search(f, np.eye(4), cfg)
    assert a[0] == b[0] and np.array_equal(a[1], b[1])


def test_rank_zero_rejected():
    with pytest.raises(InvalidInputError):
        nelder_mead_sphere(lambda u: 0.0, np.zeros((3, 0)))
    with pytest.raises(InvalidInputError):
        refined_random_search(lambda u: 0.0, np.zeros((3, 0)))


def test_rank_one_tries_both_signs():
    val, u = nelder_mead_sphere(lambda u: float(u[1]), np.eye(3)[:, 1:2])
    assert val == -1.0
    assert np.array_equal(u, [0.0, -1.0, 0.0])


def test_history_nonincreasing_and_budget_respected():
    c = np.array([1.0, 2.0, -0.5])
    cfg = OptimizerConfig(budget_k=300, restarts=5, tol=1e-14, seed=0)

    def evaluate(T, _idx):
        return np.sin(4 * T @ c)

    res = nm_search(evaluate, 3, cfg, np.random.default_rng(0))
    assert res.evaluations <= cfg.budget_k
    assert np.all(np.diff(res.history) <= 0)
    assert res.history[-1] == res.value


def test_more_budget_never_hurts():
    rng = np.random.default_rng(8)
    for _ in range(10):
        c = rng.standard_normal(4)

        def evaluate(T, _idx, c=c):
            return np.cos(5 * T @ c) + 0.1 * T[:, 0]

        vals = [nm_search(evaluate, 4, OptimizerConfig(budget_k=k, seed=1),
                          np.random.default_rng(3)).value for k in (250, 500, 1000)]
        assert vals[0] >= vals[1] >= vals[2]
