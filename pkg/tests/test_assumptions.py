import numpy as np
import pytest

from bousswave import symbols as sy
from bousswave.assumptions import (check_assumptions, estimate_growth, estimate_smoothing,
                                   inverse_approx_residual, predicted_exponent,
                                   verify_inverse_approx)
from bousswave.errors import AssumptionViolated, ScanUnresolved, SmoothingMismatch, SpectrumCollision
from bousswave.models import make_abcd, make_builtin, make_custom
from bousswave.spectral import Grid

K = sy.tanh_ratio()


@pytest.mark.parametrize("name", ["asmp", "hp", "ddk", "abcd"])
def test_all_items_pass(specs, name):
    report = check_assumptions(specs[name])
    assert report.ok, report.to_dict()
    assert report.gamma == pytest.approx(4.5)
    assert report.predicted_exponent == pytest.approx(1.5, abs=1e-6)


def test_asmp_scan_values():
    report = check_assumptions(make_builtin("asmp"), xi1=1.0, xi_max=100.0)
    assert report.m1 == pytest.approx(np.sqrt(np.tanh(1.0)), abs=1e-12)
    # M''(1) from a 50-digit evaluation; M'' increases on [0, 1]
    assert report.m2 == pytest.approx(-0.018952057169, abs=1e-8)
    # M -> 0 at infinity, so inf (M + M(0)) is M(0) itself
    assert report.m3 == pytest.approx(1.0, abs=1e-12)
    assert report.ok


def test_constant_M_fails_item_one():
    one = sy.constant(1.0)
    spec = make_custom(one, "1/2", "1", "1", validate=False)
    report = check_assumptions(spec)
    assert report.m2 == 0.0
    assert not report.passes[1]
    assert not report.passes[7]


def test_degenerate_abcd():
    spec = make_abcd(-1 / 3, 1 / 3, -1 / 3, 1 / 3, validate=False)
    xs = np.linspace(0, 50, 101)
    np.testing.assert_allclose(spec.M(xs), 1.0, rtol=1e-14)
    report = check_assumptions(spec)
    assert not report.passes[1]


def test_report_is_deterministic(specs):
    a = check_assumptions(specs["ddk"]).to_dict()
    b = check_assumptions(specs["ddk"]).to_dict()
    assert a == b


def test_report_json_fields(specs):
    d = check_assumptions(specs["hp"]).to_dict()
    for key in ("xi1", "m1", "m2", "m3", "beta_est", "s_h_est", "s_t_est", "gamma",
                "predicted_exponent", "passes", "notes", "all_pass"):
        assert key in d
    assert set(d["passes"]) == {str(i) for i in range(1, 8)}


@pytest.mark.parametrize("kw", [dict(xi1=0.0), dict(xi1=2.0, xi_max=1.0), dict(samples=10)])
def test_check_preconditions(specs, kw):
    with pytest.raises(ValueError):
        check_assumptions(specs["asmp"], **kw)


def test_scan_unresolved():
    wiggly = sy.MultiplierSymbol(lambda x: 1 / (1 + x**2 / 6) + 0.5 * np.sin(x) * (x > 2),
                                 value_at_zero=1.0, d2_at_zero=-1 / 3)
    spec = make_custom(wiggly, "1/2", "1", "1")
    with pytest.raises(ScanUnresolved):
        check_assumptions(spec)


@pytest.mark.parametrize("sym, expected", [
    (sy.constant(2.0), 0.0),
    (sy.polynomial([0.0, 0.5]), 1.0),
    (sy.reciprocal(K), 0.0),
])
def test_estimate_growth(sym, expected):
    assert estimate_growth(sym) == pytest.approx(expected, abs=0.05)


def test_estimate_smoothing():
    one = sy.constant(1.0)
    assert estimate_smoothing(one, one) == 0.0
    assert estimate_smoothing(K, sy.reciprocal(K)) == pytest.approx(1.0, abs=0.05)
    with pytest.raises(SmoothingMismatch):
        estimate_smoothing(one, sy.polynomial([1.0, 1.0]))


@pytest.mark.parametrize("args, expected", [((0, 0, 0), 1.5), ((0, 1, 1), 1.5),
                                            ((0, 1.5, 0), 1.0), ((0.5, 0, 0), 4 / 3)])
def test_predicted_exponent(args, expected):
    assert predicted_exponent(*args) == pytest.approx(expected)


def test_inverse_approx_vanishes_at_origin():
    r = inverse_approx_residual(make_builtin("ddk"), 0.1, np.array([0.0]))
    assert abs(r[0]) < 1e-12


def test_inverse_approx_order(specs, grid):
    eps = [0.2, 0.1, 0.05, 0.025]
    res = [verify_inverse_approx(specs["ddk"], e, grid) for e in eps]
    assert all(a >= b for a, b in zip(res, res[1:]))
    for a, b in zip(res[1:], res[2:]):
        assert 3.2 <= a / b <= 4.8


def test_inverse_approx_guards(grid):
    flat = make_custom(sy.polynomial([1.0, 0.5]), "1/2", "1", "1", validate=False)
    with pytest.raises(AssumptionViolated):
        verify_inverse_approx(flat, 0.1, grid)
    growing = make_custom("1 - k^2/6 + k^4/10", "1/2", "1", "1")
    with pytest.raises(SpectrumCollision):
        verify_inverse_approx(growing, 0.5, grid)
