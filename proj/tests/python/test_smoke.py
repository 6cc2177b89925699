import json
import math

import numpy as np
import pytest

import sigmalab as sl


def test_sigma2_and_linearization():
    h = np.diag([1.0, 0.5, 0.5])
    assert sl.sigma2_tilde(h) == pytest.approx(1.0)
    c = sl.sigma2_linearization(h)
    assert np.allclose(c, np.diag([1.0, 1.0, 1.0]))


def test_counterexample_is_a_solution():
    u = sl.Candidate.counterexample()
    assert u.dim == 3
    assert u.residual(np.array([0.3, -1.2, 0.4])) == pytest.approx(0.0, abs=1e-12)
    sweep = sl.residual_sweep(u, samples=2000, seed=1)
    assert sweep["max_abs_residual"] <= 1e-12
    assert sweep["max_ode_identity_error"] <= 1e-12


def test_hessian_matches_value_differences():
    u = sl.Candidate.he_form(3, 0.5, {(1, 0): 0.3})
    x = np.array([0.2, 0.1, -0.4])
    eps = 1e-5
    e = np.eye(3) * eps
    fd = [(u.value(x + e[i]) - u.value(x - e[i])) / (2 * eps) for i in range(3)]
    assert np.allclose(u.gradient(x), fd, atol=1e-8)
    assert np.allclose(u.hessian(x), u.hessian(x).T)


def test_kahler_metric_and_curvature():
    u = sl.Candidate.counterexample()
    g = sl.metric(u, (0, 0, 1, 0))
    assert np.allclose(g, [[0.3125, 0.5], [0.5, 1.0]])
    assert np.linalg.det(g).real == pytest.approx(1 / 16)
    assert np.abs(sl.ricci(u, (0.3, 0.2, -0.7, 1.1))).max() < 1e-8
    assert sl.riemann(u, (0, 0, 1, 0)).shape == (2, 2, 2, 2)
    control = sl.Candidate.radial_exp([(0.25, 0, -1.0), (1.0, 2, 0.0)])
    assert sl.riemann_norm(control, (0, 0, 1, 0)) == pytest.approx(1024 / 531441, rel=1e-10)


def test_solver_on_quadratic_data():
    r = sl.solve(sl.Candidate.default_quadratic(), nodes=9)
    assert r["converged"]
    assert r["iterations"] <= 3
    sol = r["solution"]
    assert sol.shape == (9, 9, 9)
    t = np.linspace(-1, 1, 9)
    exact = 0.5 * t[:, None, None] ** 2 + 0.25 * (t[None, :, None] ** 2 + t[None, None, :] ** 2)
    assert np.abs(sol - exact).max() < 1e-10


def test_barrier_and_classification():
    t = sl.barrier_trial(sl.Candidate.default_quadratic(), 2.0)
    assert t["pass"]
    assert t["value"] * 16 == pytest.approx(1.0, abs=1e-8)
    suite = sl.random_barrier_suite(10, 3)
    assert len(suite) == 10 and all(s["pass"] for s in suite)
    assert sl.classify(sl.Candidate.default_quadratic())["he_form"]
    assert not sl.classify(sl.Candidate.counterexample())["he_form"]


def test_legendre_of_quadratic_is_identity_in_z():
    r = sl.legendre(sl.Candidate.default_quadratic(), t_range=(-1, 1), nodes=9)
    lo, hi = r["z_range"]
    z = np.linspace(lo, hi, 9)
    assert np.allclose(r["theta"], z[:, None, None] + 0 * r["theta"], atol=1e-10)


def test_errors_carry_their_kind():
    with pytest.raises(sl.SigmalabError, match="NotASolution"):
        sl.Candidate.quadratic(np.eye(3), np.zeros(3))
    with pytest.raises(sl.SigmalabError, match="InvalidArgument"):
        sl.Candidate.counterexample(-1.0)


def test_json_round_trip():
    u = sl.Candidate.he_form(3, 0.8, {(2, 0): 0.4, (0, 2): -0.4})
    v = sl.Candidate.from_json(u.to_json())
    x = np.array([0.1, 0.2, 0.3])
    assert v.value(x) == u.value(x)
    assert json.loads(v.to_json()) == json.loads(u.to_json())


def test_cli_in_process():
    code, out, _ = sl.run_cli(["verify", "--candidate", "counterexample", "--samples", "500"])
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "pass"
    assert math.isfinite(report["checks"][0]["value"])
    code, _, _ = sl.run_cli(["verify", "--candidate", "nonsense"])
    assert code == 2
