import numpy as np
import pytest

from bousswave import symbols as sy
from bousswave.errors import (GammaZero, GridUnderResolved, NewtonDiverged, SpectrumCollision,
                              SweepFailed)
from bousswave.models import SystemSpec, make_custom
from bousswave.solver import (RescaledMap, SolveConfig, calK_apply, calK_matrix,
                              calK_min_singular, continuation_sweep, kdv_profile, newton_solve,
                              omega_of, phi_eval, phi_jacobian_apply)
from bousswave.spectral import Field, Grid, derivative, hs_norm, multiply

from conftest import scaled_to, smooth_even_field


def _toy_spec(m2):
    M = sy.polynomial([1.0, m2 / 2])
    one = sy.constant(1.0)
    return SystemSpec("toy", M, sy.constant(0.5), one, one, one, one, gamma=1.0)


@pytest.mark.parametrize("gamma, peak", [(1.5, 1.0), (4.5, 1 / 3)])
def test_kdv_peak(gamma, peak, grid):
    sigma = kdv_profile(gamma, grid)
    assert sigma.even
    assert sigma.values[grid.N // 2] == pytest.approx(peak, rel=1e-15)


@pytest.mark.parametrize("gamma", [1.5, 4.5, -2.0])
def test_kdv_equation(gamma, grid):
    sigma = kdv_profile(gamma, grid)
    r = -derivative(sigma, 2) + sigma - gamma * multiply(sigma, sigma)
    assert hs_norm(r, 1) <= 1e-10


def test_kdv_gamma_zero(grid):
    with pytest.raises(GammaZero):
        kdv_profile(0.0, grid)


@pytest.mark.parametrize("m2, eps, expected", [(-1 / 3, 0.0, 1.0), (-1 / 3, 0.1, 1 + 0.01 / 6),
                                               (-1.0, 1.0, 1.5)])
def test_omega(m2, eps, expected):
    assert omega_of(_toy_spec(m2), eps) == pytest.approx(expected, rel=1e-15)


def test_solve_config_invariants():
    with pytest.raises(ValueError):
        SolveConfig(s=0.5)
    with pytest.raises(ValueError):
        SolveConfig(newton_tol=0)
    with pytest.raises(ValueError):
        SolveConfig(max_iter=0)


def test_limit_map_fixed_point(specs, grid):
    for spec in specs.values():
        sigma = kdv_profile(spec.gamma, grid)
        assert hs_norm(phi_eval(spec, sigma, 0.0), 1) <= 1e-10


def test_phi_of_zero(specs, grid):
    zero = Field.zeros(grid)
    for spec in specs.values():
        np.testing.assert_array_equal(phi_eval(spec, zero, 0.1).values, 0.0)


def test_phi_at_sigma_shrinks(specs, grid):
    sigma = kdv_profile(4.5, grid)
    norms = [hs_norm(phi_eval(specs["ddk"], sigma, e), 1) for e in (0.2, 0.1, 0.05)]
    assert norms[0] > norms[1] > norms[2]


def test_phi_under_resolved(specs, grid):
    rough = Field.from_function(grid, lambda x: np.cos(grid.xi[400] * x), even=True)
    with pytest.raises(GridUnderResolved):
        phi_eval(specs["ddk"], rough, 0.1)


def test_spectrum_collision(grid):
    spec = make_custom("1 - k^2/6 + k^4/10", "1/2", "1", "1")
    with pytest.raises(SpectrumCollision):
        phi_eval(spec, kdv_profile(spec.gamma, grid), 0.5)
    with pytest.raises(SpectrumCollision):
        newton_solve(spec, 0.5)


def test_jacobian_trivial_cases(specs, grid):
    rng = np.random.default_rng(5)
    w = smooth_even_field(grid, rng)
    zero = Field.zeros(grid)
    spec = specs["ddk"]
    sigma = kdv_profile(4.5, grid)
    np.testing.assert_array_equal(phi_jacobian_apply(spec, sigma, 0.1, zero).values, 0.0)
    np.testing.assert_allclose(phi_jacobian_apply(spec, zero, 0.0, w).values, w.values, atol=1e-15)


def test_jacobian_at_limit_is_calK(specs, grid):
    rng = np.random.default_rng(6)
    sigma = kdv_profile(4.5, grid)
    for _ in range(3):
        w = smooth_even_field(grid, rng)
        a = phi_jacobian_apply(specs["asmp"], sigma, 0.0, w)
        b = calK_apply(4.5, w)
        np.testing.assert_allclose(a.values, b.values, atol=1e-12)


@pytest.mark.parametrize("name", ["ddk", "hp", "abcd"])
def test_jacobian_central_difference(specs, grid, name):
    # Phi is a cubic polynomial in v, so the central-difference error is exactly
    # quadratic in h; steps are chosen so the h^2 term dominates rounding
    spec = specs[name]
    rng = np.random.default_rng(7)
    sigma = kdv_profile(spec.gamma, grid)
    w = scaled_to(smooth_even_field(grid, rng), hs_norm(sigma, 1))
    J = phi_jacobian_apply(spec, sigma, 0.1, w)
    errs = []
    for h in (1e-2, 5e-3):
        fd = (phi_eval(spec, sigma + h * w, 0.1) - phi_eval(spec, sigma - h * w, 0.1)) / (2 * h)
        errs.append(hs_norm(fd - J, 1))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)


def test_jacobian_matrix_columns(specs, small_grid):
    g = small_grid
    spec = specs["hp"]
    op = RescaledMap(spec, g, 0.1)
    sigma = kdv_profile(4.5, g).values
    A = op.jacobian_matrix(sigma)
    rng = np.random.default_rng(8)
    c = rng.standard_normal(g.n_modes) * np.exp(-np.arange(g.n_modes) / 10)
    w = g.from_cos(c)
    direct = g.cos_coeffs(op.jacobian_apply(sigma, w))
    np.testing.assert_allclose(A @ c, direct, atol=1e-12)


def test_calK_zero(grid):
    np.testing.assert_array_equal(calK_apply(4.5, Field.zeros(grid)).values, 0.0)


def test_calK_kernel(grid):
    ds = derivative(kdv_profile(4.5, grid))
    assert hs_norm(calK_apply(4.5, ds), 0) <= 1e-8 * hs_norm(ds, 0)


def test_calK_min_singular(grid):
    smin = calK_min_singular(4.5, grid)
    assert smin > 0.05
    # regression value from the first dense SVD run on this grid
    assert smin == pytest.approx(0.36034, abs=1e-4)


def test_calK_matrix_orthonormal_basis(small_grid):
    g = small_grid
    A = calK_matrix(4.5, g)
    rng = np.random.default_rng(9)
    c = rng.standard_normal(g.n_modes) * np.exp(-np.arange(g.n_modes) / 8)
    # coefficients in an L2-orthonormal cosine basis
    norms = np.sqrt(g.L * np.where(g._mult == 1.0, 2.0, 1.0))
    f = Field.from_coeffs(g, c / norms)
    assert hs_norm(f, 0) == pytest.approx(np.linalg.norm(c), rel=1e-12)
    assert hs_norm(calK_apply(4.5, f), 0) == pytest.approx(np.linalg.norm(A @ c), rel=1e-10)


def test_newton_ddk(specs):
    r = newton_solve(specs["ddk"], 0.05, config=SolveConfig(N=512))
    assert r.iterations <= 6
    assert r.phi_norm <= 1e-11
    assert r.deviation < 0.05
    assert r.V.even and r.V.odd_part_ratio() <= 1e-12
    assert r.omega == pytest.approx(1 + 0.0025 / 6)
    assert r.jacobian_condition >= 1.0


def test_newton_projects_even(specs, grid):
    sigma = kdv_profile(4.5, grid)
    shifted = Field.from_function(grid, lambda x: 1.5 / 4.5 / np.cosh((x - 0.05) / 2) ** 2)
    r = newton_solve(specs["asmp"], 0.1, init=shifted)
    ref = newton_solve(specs["asmp"], 0.1, init=sigma)
    assert r.V.odd_part_ratio() <= 1e-12
    assert hs_norm(r.V - ref.V, 1) <= 1e-8


def test_newton_history_monotone(specs):
    r = newton_solve(specs["hp"], 0.1)
    assert r.history[-1] == r.phi_norm
    assert all(b < a for a, b in zip(r.history, r.history[1:]))


def test_newton_rejects_eps(specs):
    for eps in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            newton_solve(specs["ddk"], eps)


def test_newton_max_iter(specs):
    with pytest.raises(NewtonDiverged) as err:
        newton_solve(specs["ddk"], 0.1, config=SolveConfig(max_iter=1, newton_tol=1e-30))
    assert err.value.iterations == 1


def test_newton_recovers_from_far_start(specs, grid):
    ref = newton_solve(specs["asmp"], 0.1)
    far = newton_solve(specs["asmp"], 0.1, init=kdv_profile(4.5, grid) * 40.0)
    assert hs_norm(far.V - ref.V, 1) <= 1e-8


def test_newton_two_increases_diverge(specs, monkeypatch):
    # a sign-flipped Jacobian pushes every step uphill
    orig = RescaledMap.jacobian_matrix
    monkeypatch.setattr(RescaledMap, "jacobian_matrix", lambda self, v: -orig(self, v))
    with pytest.raises(NewtonDiverged) as err:
        newton_solve(specs["ddk"], 0.1, config=SolveConfig(N=256))
    assert err.value.iterations == 2
    assert err.value.eps == 0.1


def test_sweep_retries_through_half_eps(specs, monkeypatch):
    import bousswave.solver as solver
    calls = []
    real = solver.newton_solve

    def flaky(spec, eps, init=None, config=None, log_progress=False):
        calls.append((eps, init is None))
        if eps == 0.2 and init is None:
            raise NewtonDiverged(3, 1.0, eps)
        return real(spec, eps, init, config)

    monkeypatch.setattr(solver, "newton_solve", flaky)
    res = solver.continuation_sweep(specs["ddk"], [0.2, 0.1, 0.05], SolveConfig(N=256))
    assert [r.eps for r in res] == [0.2, 0.1, 0.05]
    assert calls[:3] == [(0.2, True), (0.1, True), (0.2, False)]


def test_sweep_empty(specs):
    assert continuation_sweep(specs["ddk"], []) == []


def test_sweep_requires_descending(specs):
    with pytest.raises(ValueError):
        continuation_sweep(specs["ddk"], [0.05, 0.1])


def test_sweep_gap(specs):
    res = continuation_sweep(specs["ddk"], [0.5, 0.0125])
    cold = newton_solve(specs["ddk"], 0.0125)
    assert hs_norm(res[-1].V - cold.V, 1) <= 1e-8


def test_sweep_cold_matches_warm(specs):
    cfg = SolveConfig(N=256)
    warm = continuation_sweep(specs["hp"], [0.2, 0.1, 0.05], cfg)
    cold = continuation_sweep(specs["hp"], [0.2, 0.1, 0.05], cfg, warm_start=False, workers=2)
    for a, b in zip(warm, cold):
        assert a.eps == b.eps
        assert hs_norm(a.V - b.V, 1) <= 1e-8


def test_sweep_failure_keeps_partials(grid):
    spec = make_custom("1 - k^2/6 + k^4/10", "1/2", "1", "1")
    with pytest.raises(SweepFailed) as err:
        continuation_sweep(spec, [0.2, 0.1, 0.05, 0.01], SolveConfig())
    assert err.value.eps > 0
    assert all(r.phi_norm <= 1e-11 for r in err.value.results)
    assert err.value.cause["error"] == "SpectrumCollision"
